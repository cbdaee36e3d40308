// abtqft: batch front end for the abelian TQFT library.
//
// Exit codes: 0 success, 1 verification failure or internal error, 2 parse error,
// 3 unsupported order p, 4 Lagrangian mismatch, 5 missing closure.

#include "abtqft/abtqft.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <numeric>
#include <optional>
#include <string>

using namespace abtqft;
using io::json;

namespace {

constexpr int kVerifyFailed = 1;
constexpr int kParseError = 2;
constexpr int kUnsupported = 3;
constexpr int kMismatch = 4;
constexpr int kMissingClosure = 5;

struct Options {
  int p = 0;
  int digits = 12;
  std::string input, input2, vector_file, closure_file, mode = "closed";
  bool verify = false, normalized = false;
  long long beta = 0, alpha = 0;
};

struct VerifyFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json header(const std::string& command, const Options& o) { return {{"command", command}, {"p", o.p}, {"approx_digits", o.digits}}; }

json scalar(const CycNum& x, const Options& o) { return io::to_json(x, o.digits); }

json refinements(const IntMat& B, const CycNum& Z, const Options& o) {
  const int r = static_cast<int>(mod(o.p, 8));
  if (r != 0 && r != 4) return nullptr;
  RefinementKind kind = r == 4 ? RefinementKind::spin : RefinementKind::cohomology;
  json classes = json::array();
  CycNum sum = CycNum::zero(field_order(o.p));
  for (const auto& c : refinement_classes(B, kind)) {
    CycNum v = refined_invariant(B, c, o.p);
    sum += v;
    classes.push_back({{"bits", c.bits}, {"satisfies_system", satisfies_system(B, c)}, {"Z", scalar(v, o)}});
  }
  return {{"kind", to_string(kind)}, {"classes", classes}, {"sum", scalar(sum, o)}, {"sum_equals_Z", sum == Z}};
}

json cmd_invariant(const Options& o) {
  SurgeryPresentation s = io::presentation_from_json(io::load_file(o.input));
  require_supported(o.p);
  if (!s.fixed_colors.empty()) throw io::ParseError("invariant: fixed_colors are only meaningful for the tqft command");
  CycNum Z = z_invariant(s.B, o.p);
  json out = header("invariant", o);
  out["components"] = s.B.size();
  out["signature"] = signature(s.B);
  out["Z"] = scalar(Z, o);
  json ref = refinements(s.B, Z, o);
  if (!ref.is_null()) out["refinements"] = ref;
  return out;
}

json cmd_refine(const Options& o) {
  SurgeryPresentation s = io::presentation_from_json(io::load_file(o.input));
  require_supported(o.p);
  if (mod(o.p, 4) != 0) throw UnsupportedOrder("refine requires p = 0 (mod 4), got p = " + std::to_string(o.p));
  CycNum Z = z_invariant(s.B, o.p);
  json out = header("refine", o);
  out["Z"] = scalar(Z, o);
  out["refinements"] = refinements(s.B, Z, o);
  return out;
}

json cmd_lens(const Options& o) {
  require_supported(o.p);
  if (o.beta == 0 && o.alpha == 0) throw io::ParseError("lens: (beta, alpha) = (0, 0) is not a lens space");
  if (std::gcd(o.beta, o.alpha) != 1) throw io::ParseError("lens: gcd(beta, alpha) must be 1");
  json out = header("lens", o);
  out["beta"] = o.beta;
  out["alpha"] = o.alpha;
  out["continued_fraction"] = continued_fraction(o.beta, o.alpha);
  CycNum Z = z_lens(o.beta, o.alpha, o.p);
  out["Z"] = scalar(Z, o);
  // colored Hopf chain: eta * <chain_k> against q^{-k k'} Z, where k' solves beta k' = alpha k
  const auto& ek = eta_kappa(o.p);
  json chain = json::array();
  for (long long k = 0; k < pprime_of(o.p); ++k) {
    CycNum me = ek.eta * matrix_element(colored_chain(o.beta, o.alpha, k), 0, o.p);
    chain.push_back({{"k", k}, {"eta_matrix_element", scalar(me, o)}});
  }
  out["colored_chain"] = chain;
  return out;
}

Mode parse_mode(const std::string& m) { return m == "oracle" ? Mode::oracle : Mode::closed; }

json cmd_tqft(const Options& o) {
  CobordismProgram prog = io::program_from_json(io::load_file(o.input));
  std::optional<SchrodingerVec> v;
  if (!o.vector_file.empty()) v = io::schrodinger_from_json(io::load_file(o.vector_file), o.p);
  std::optional<SurgeryPresentation> closure;
  if (!o.closure_file.empty()) closure = io::presentation_from_json(io::load_file(o.closure_file));
  require_supported(o.p);
  const Mode mode = parse_mode(o.mode);

  ProgramMap m;
  std::optional<CycNum> factor;
  if (o.normalized || closure) {
    NormalizedMap nm = normalized_map(prog, o.p, closure, mode);
    m = nm.map;
    factor = nm.factor;
  } else {
    m = F_program(prog, o.p, mode);
  }

  json out = header("tqft", o);
  out["mode"] = to_string(mode);
  out["used_oracle"] = m.used_oracle;
  out["normalized"] = factor.has_value();
  if (factor) out["closure_factor"] = scalar(*factor, o);
  out["source_dim"] = m.source.dim();
  out["target_dim"] = m.target.dim();
  if (v) {
    if (v->coeffs.size() != m.source.dim()) throw io::ParseError("vector does not match the source genus");
    out["output"] = io::to_json(SchrodingerVec{m.target.pp(), m.target.genus(), m.matrix.apply(v->coeffs)}, o.digits);
  } else {
    out["matrix"] = io::to_json(m.matrix, o.digits);
  }
  if (o.verify) {
    ProgramMap other = F_program(prog, o.p, mode == Mode::closed ? Mode::oracle : Mode::closed);
    CycMatrix lhs = factor ? *factor * other.matrix : other.matrix;
    bool ok = lhs == m.matrix;
    out["verify"] = {{"against", to_string(mode == Mode::closed ? Mode::oracle : Mode::closed)}, {"equal", ok}};
    if (!ok) {
      throw VerifyFailure("closed and oracle maps differ");
    }
  }
  return out;
}

json cmd_heis(const Options& o) {
  json doc = io::load_file(o.input);
  require_supported(o.p);
  int g = static_cast<int>(io::to_int(io::field(doc, "genus"), "genus"));
  if (g < 0) throw io::ParseError("genus must be non-negative");
  IntMat L = doc.contains("L") ? io::intmat_from_json(doc.at("L")) : Lagrangian::meridians(g).basis;
  for (const auto& r : L)
    if (r.size() != static_cast<std::size_t>(2 * g)) throw io::ParseError("Lagrangian rows must have 2g entries");
  HeisContext ctx = HeisContext::make(o.p, standard_form(g), L);
  HeisSplit prod = ctx.unit();
  const json& els = io::field(doc, "elements");
  if (!els.is_array()) throw io::ParseError("elements must be an array");
  for (const auto& e : els) prod = ctx.mul(prod, io::heis_from_json(e, ctx));
  json out = header("heis", o);
  out["genus"] = g;
  out["dim"] = ctx.dim();
  out["product"] = io::to_json(prod);
  out["product_integral"] = io::to_json(ctx.lift(prod));
  if (doc.contains("vector")) {
    SchrodingerVec v = io::schrodinger_from_json(doc.at("vector"), o.p);
    if (v.genus != g) throw io::ParseError("vector genus does not match");
    out["action"] = io::to_json(SchrodingerVec{v.pp, g, ctx.action(prod).apply(v.coeffs)}, o.digits);
  }
  return out;
}

json cmd_mcg(const std::string& sub, const Options& o) {
  MappingClass f = io::mapping_class_from_json(io::load_file(o.input));
  std::optional<MappingClass> g;
  if (!o.input2.empty()) {
    g = io::mapping_class_from_json(io::load_file(o.input2));
    if (g->genus() != f.genus()) throw io::ParseError("mapping classes have different genera");
  }
  require_supported(o.p);
  json out = header("mcg " + sub, o);
  out["genus"] = f.genus();
  out["matrix"] = f.matrix();
  if (sub == "theta") {
    IntVec th = theta(f);
    out["theta"] = th;
    if (o.p % 2 == 1) out["t"] = t_dual(th, o.p);
    return out;
  }
  if (o.p % 2 == 0) throw UnsupportedOrder("mcg " + sub + " requires odd p, got p = " + std::to_string(o.p));
  HeisContext ctx = HeisContext::standard(o.p, f.genus());
  if (sub == "cocycle") {
    if (!g) throw io::ParseError("mcg cocycle needs a second mapping class");
    long long c = cocycle_c(f, *g, o.p);
    CycNum measured = measured_cocycle(f, *g, ctx);
    bool forms = cocycle_c_pushforward(f, *g, o.p) == c && cocycle_c_inverse(f, *g, o.p) == c;
    bool ok = measured == q_power(o.p, c);
    out["c"] = c;
    out["closed_forms_agree"] = forms;
    out["measured"] = scalar(measured, o);
    out["measured_equals_q_c"] = ok;
    if (o.verify && !(ok && forms)) {
      throw VerifyFailure("measured cocycle differs from q^c");
    }
    return out;
  }
  // weil
  CycMatrix S = weil_intertwiner(f.matrix(), ctx);
  CycMatrix SH = weil_H(f, ctx);
  std::vector<HeisIntegral> hs;
  for (int i = 0; i < 2 * f.genus(); ++i) hs.push_back({0, unit(static_cast<std::size_t>(2 * f.genus()), static_cast<std::size_t>(i))});
  bool ok = intertwines(S, f.matrix(), ctx, hs);
  out["S"] = io::to_json(S, o.digits);
  out["S_H"] = io::to_json(SH, o.digits);
  out["intertwines"] = ok;
  if (g) out["defect_ratio"] = scalar(measured_cocycle(f, *g, ctx), o);
  if (!ok) {
    std::cout << out.dump(2) << "\n";
    throw VerifyFailure("S does not intertwine");
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact abelian TQFT computations"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("--p", o.p, "order of the root of unity q")->required();
    c->add_option("--digits", o.digits, "digits of the float approximations")->check(CLI::Range(1, 12));
  };

  auto* inv = app.add_subcommand("invariant", "Z(M) of a surgery presentation");
  common(inv);
  inv->add_option("presentation", o.input, "presentation JSON")->required();

  auto* ref = app.add_subcommand("refine", "spin or cohomology refinements (p = 0 mod 4)");
  common(ref);
  ref->add_option("presentation", o.input, "presentation JSON")->required();

  auto* lens = app.add_subcommand("lens", "Z(L(beta, alpha)) and the colored Hopf chain");
  common(lens);
  lens->add_option("--beta", o.beta)->required();
  lens->add_option("--alpha", o.alpha)->required();

  auto* tqft = app.add_subcommand("tqft", "F or the normalized map of a cobordism program");
  common(tqft);
  tqft->add_option("program", o.input, "program JSON")->required();
  tqft->add_option("--vector", o.vector_file, "input vector JSON; prints the full matrix if omitted");
  tqft->add_option("--mode", o.mode)->check(CLI::IsMember({"closed", "oracle"}));
  tqft->add_flag("--verify", o.verify, "compare against the other mode");
  tqft->add_flag("--normalized", o.normalized, "apply the closure factor");
  tqft->add_option("--closure", o.closure_file, "closure presentation JSON (implies --normalized)");

  auto* heis = app.add_subcommand("heis", "Heisenberg products and their action");
  common(heis);
  heis->add_option("input", o.input, "elements JSON")->required();

  auto* mcg = app.add_subcommand("mcg", "mapping class group layer");
  mcg->require_subcommand(1);
  std::string mcg_sub;
  for (const char* name : {"theta", "cocycle", "weil"}) {
    auto* s = mcg->add_subcommand(name);
    common(s);
    s->add_option("f", o.input, "mapping class JSON")->required();
    s->add_option("g", o.input2, "second mapping class JSON");
    if (std::string(name) == "cocycle") s->add_flag("--verify", o.verify);
    s->callback([&mcg_sub, name] { mcg_sub = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kParseError;
  }

  try {
    json out;
    if (*inv) out = cmd_invariant(o);
    else if (*ref) out = cmd_refine(o);
    else if (*lens) out = cmd_lens(o);
    else if (*tqft) out = cmd_tqft(o);
    else if (*heis) out = cmd_heis(o);
    else out = cmd_mcg(mcg_sub, o);
    std::cout << out.dump(2) << "\n";
    return 0;
  } catch (const VerifyFailure& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kVerifyFailed;
  } catch (const io::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const InvalidPresentation& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const UnsupportedOrder& e) {
    std::cerr << "unsupported order: " << e.what() << "\n";
    return kUnsupported;
  } catch (const LagrangianMismatch& e) {
    std::cerr << "Lagrangian mismatch: " << e.what() << "\n";
    return kMismatch;
  } catch (const LagrangianError& e) {
    std::cerr << "Lagrangian error: " << e.what() << "\n";
    return kMismatch;
  } catch (const MissingClosure& e) {
    std::cerr << "missing closure: " << e.what() << "\n";
    return kMissingClosure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
