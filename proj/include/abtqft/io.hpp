#pragma once

// JSON documents for scalars, lattices, Heisenberg elements, vectors,
// presentations, cobordism programs and mapping classes.

#include "abtqft/cobordism.hpp"
#include "abtqft/cyclotomic.hpp"
#include "abtqft/heisenberg.hpp"
#include "abtqft/mcg.hpp"
#include "abtqft/surgery.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace abtqft::io {

using json = nlohmann::json;

/// Malformed input document.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

inline json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline long long to_int(const json& j, const char* what) {
  if (!j.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
  return j.get<long long>();
}

// ---------------------------------------------------------------------------
// Scalars
// ---------------------------------------------------------------------------

inline json to_json(const CycNum& x, int digits = 12) {
  json j{{"order", x.order()}, {"coeffs", x.coeff_strings()}};
  if (digits > 0) j["approx"] = to_complex(x, digits);
  return j;
}

inline CycNum cycnum_from_json(const json& j) {
  if (j.is_number_integer()) throw ParseError("scalar shorthand needs an order; use {\"order\": M, \"coeffs\": [...]}");
  long long M = to_int(field(j, "order"), "order");
  if (M <= 0 || M % 8 != 0) throw ParseError("order must be a positive multiple of 8");
  const json& c = field(j, "coeffs");
  if (!c.is_array()) throw ParseError("coeffs must be an array");
  std::vector<Rational> coeffs;
  for (const auto& e : c) {
    Rational r;
    try {
      if (e.is_number_integer())
        r = Rational(static_cast<long>(e.get<long long>()));
      else if (e.is_string())
        r = Rational(e.get<std::string>());
      else
        throw ParseError("coefficient must be a string n/d or an integer");
    } catch (const std::invalid_argument&) {
      throw ParseError("bad rational coefficient " + e.dump());
    }
    if (r.get_den() == 0) throw ParseError("zero denominator in coefficient " + e.dump());
    r.canonicalize();
    coeffs.push_back(r);
  }
  if (coeffs.size() != static_cast<std::size_t>(euler_phi(static_cast<int>(M))))
    throw ParseError("coeffs length must equal phi(order)");
  return CycNum(static_cast<int>(M), coeffs);
}

// ---------------------------------------------------------------------------
// Integer data
// ---------------------------------------------------------------------------

inline json to_json(const IntMat& A) { return A; }

inline IntVec intvec_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected an integer array");
  IntVec v;
  for (const auto& e : j) v.push_back(to_int(e, "entry"));
  return v;
}

inline IntMat intmat_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected an integer matrix");
  IntMat A;
  for (const auto& r : j) A.push_back(intvec_from_json(r));
  for (const auto& r : A)
    if (r.size() != A[0].size()) throw ParseError("matrix rows have different lengths");
  return A;
}

// ---------------------------------------------------------------------------
// Heisenberg elements and vectors
// ---------------------------------------------------------------------------

inline json to_json(const HeisSplit& h) { return {{"k", h.k}, {"a", h.a}, {"b", h.b}}; }
inline json to_json(const HeisIntegral& h) { return {{"k", h.k}, {"x", h.x}}; }

/// Accepts {"k","a","b"} (split) or {"k","x"} (integral, converted with ctx).
inline HeisSplit heis_from_json(const json& j, const HeisContext& ctx) {
  long long k = to_int(field(j, "k"), "k");
  if (j.contains("x")) {
    IntVec x = intvec_from_json(j.at("x"));
    if (x.size() != ctx.form().size()) throw ParseError("x has the wrong length");
    return ctx.to_finite({k, x});
  }
  HeisSplit s{k, intvec_from_json(field(j, "a")), intvec_from_json(field(j, "b"))};
  if (s.a.size() != static_cast<std::size_t>(ctx.genus()) || s.b.size() != static_cast<std::size_t>(ctx.genus()))
    throw ParseError("a and b must have one entry per handle");
  return ctx.normalize(s);
}

inline HeisIntegral heis_integral_from_json(const json& j) {
  return {to_int(field(j, "k"), "k"), intvec_from_json(field(j, "x"))};
}

/// {"genus", "pprime", "entries": [{"label": [...], "value": scalar}]} listing nonzero entries.
inline json to_json(const SchrodingerVec& v, int digits = 12) {
  json entries = json::array();
  for (std::size_t i = 0; i < v.coeffs.size(); ++i)
    if (!v.coeffs[i].is_zero()) entries.push_back({{"label", index_label(i, v.pp, v.genus)}, {"value", to_json(v.coeffs[i], digits)}});
  return {{"genus", v.genus}, {"pprime", v.pp}, {"entries", entries}};
}

/// Reads a vector; "value" may be omitted (meaning 1) or given as a scalar document.
inline SchrodingerVec schrodinger_from_json(const json& j, int p) {
  SchrodingerVec v;
  v.genus = static_cast<int>(to_int(field(j, "genus"), "genus"));
  if (v.genus < 0) throw ParseError("genus must be non-negative");
  v.pp = pprime_of(p);
  if (j.contains("pprime") && to_int(j.at("pprime"), "pprime") != v.pp) throw ParseError("pprime does not match p");
  const int M = field_order(p);
  v.coeffs.assign(ipow(static_cast<std::size_t>(v.pp), v.genus), CycNum::zero(M));
  const json& entries = field(j, "entries");
  if (!entries.is_array()) throw ParseError("entries must be an array");
  for (const auto& e : entries) {
    IntVec lab = intvec_from_json(field(e, "label"));
    if (lab.size() != static_cast<std::size_t>(v.genus)) throw ParseError("label length must equal genus");
    CycNum val = e.contains("value") ? cycnum_from_json(e.at("value")) : CycNum::one(M);
    if (val.order() != M) throw ParseError("value order does not match p");
    v.coeffs[label_index(lab, v.pp)] += val;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Presentations and programs
// ---------------------------------------------------------------------------

inline json to_json(const SurgeryPresentation& s) {
  json fc = json::object();
  for (const auto& [i, k] : s.fixed_colors) fc[std::to_string(i)] = k;
  return {{"B", s.B}, {"fixed_colors", fc}};
}

inline SurgeryPresentation presentation_from_json(const json& j) {
  SurgeryPresentation s;
  s.B = intmat_from_json(field(j, "B"));
  if (j.contains("fixed_colors")) {
    const json& fc = j.at("fixed_colors");
    if (!fc.is_object()) throw ParseError("fixed_colors must be an object");
    for (auto it = fc.begin(); it != fc.end(); ++it) {
      std::size_t idx;
      try {
        std::size_t used = 0;
        idx = std::stoul(it.key(), &used);
        if (used != it.key().size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError("fixed_colors keys must be component indices");
      }
      s.fixed_colors[idx] = to_int(it.value(), "color");
    }
  }
  try {
    validate(s);
  } catch (const InvalidPresentation& e) {
    throw ParseError(e.what());
  }
  return s;
}

inline json to_json(const CobObject& X) { return {{"genus", X.genus}, {"L", X.L.basis}}; }

inline CobObject object_from_json(const json& j) {
  int g = static_cast<int>(to_int(field(j, "genus"), "genus"));
  if (g < 0) throw ParseError("genus must be non-negative");
  IntMat L = j.contains("L") ? intmat_from_json(j.at("L")) : Lagrangian::meridians(g).basis;
  for (const auto& r : L)
    if (r.size() != static_cast<std::size_t>(2 * g)) throw ParseError("Lagrangian rows must have 2g entries");
  return CobObject::make(g, L);  // LagrangianError if not Lagrangian
}

inline json to_json(const SimpleCob& s) {
  switch (s.kind) {
    case SimpleCob::Kind::cylinder: return {{"kind", "cylinder"}, {"f", s.f}};
    case SimpleCob::Kind::index1: return {{"kind", "index1"}, {"pos", s.pos}};
    case SimpleCob::Kind::index2: return {{"kind", "index2"}, {"handle", s.handle}, {"alpha", s.alpha}, {"beta", s.beta}};
  }
  return {};
}

inline SimpleCob step_from_json(const json& j) {
  const json& k = field(j, "kind");
  if (!k.is_string()) throw ParseError("kind must be a string");
  const std::string kind = k.get<std::string>();
  if (kind == "cylinder") return SimpleCob::cylinder(intmat_from_json(field(j, "f")));
  if (kind == "index1") return SimpleCob::index1(static_cast<int>(to_int(field(j, "pos"), "pos")));
  if (kind == "index2")
    return SimpleCob::index2(static_cast<int>(j.contains("handle") ? to_int(j.at("handle"), "handle") : 0), to_int(field(j, "alpha"), "alpha"),
                             to_int(field(j, "beta"), "beta"));
  throw ParseError("unknown step kind \"" + kind + "\"");
}

inline json to_json(const CobordismProgram& prog) {
  json steps = json::array();
  for (const auto& s : prog.steps) steps.push_back(to_json(s));
  return {{"source", to_json(prog.source)}, {"steps", steps}, {"target", to_json(prog.target)}};
}

inline CobordismProgram program_from_json(const json& j) {
  CobordismProgram prog;
  prog.source = object_from_json(field(j, "source"));
  const json& steps = field(j, "steps");
  if (!steps.is_array()) throw ParseError("steps must be an array");
  for (const auto& s : steps) prog.steps.push_back(step_from_json(s));
  prog.target = object_from_json(field(j, "target"));
  int g = prog.source.genus;
  try {
    for (const auto& s : prog.steps) g = step_target_genus(s, g);
  } catch (const InvalidCobordism& e) {
    throw ParseError(e.what());
  }
  return prog;
}

// ---------------------------------------------------------------------------
// Mapping classes and braid words
// ---------------------------------------------------------------------------

inline json to_json(const FreeWord& w) { return w.letters; }

inline FreeWord word_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("a word is an array of nonzero integers");
  FreeWord w;
  for (const auto& e : j) {
    long long x = to_int(e, "letter");
    if (x == 0) throw ParseError("letter 0 is not allowed");
    w.letters.push_back(static_cast<int>(x));
  }
  return w;
}

inline json to_json(const MappingClass& f) {
  json imgs = json::array();
  for (const auto& w : f.images()) imgs.push_back(to_json(w));
  json j{{"genus", f.genus()}, {"images", imgs}};
  if (f.has_inverse()) {
    json inv = json::array();
    const MappingClass finv = f.inverse();
    for (const auto& w : finv.images()) inv.push_back(to_json(w));
    j["inverse_images"] = inv;
  }
  return j;
}

/// Built-in twist by name: "ta<i>", "tb<i>" (1-based handle) or "tc" (genus 2), optional "^-1".
inline MappingClass twist_from_name(const std::string& name, int g) {
  std::string base = name;
  bool inv = false;
  if (base.size() > 3 && base.compare(base.size() - 3, 3, "^-1") == 0) {
    inv = true;
    base.resize(base.size() - 3);
  }
  MappingClass t = MappingClass::identity_class(g);
  if (base == "tc") {
    if (g != 2) throw ParseError("tc is only defined in genus 2");
    t = twists::t_connect();
  } else if (base.size() >= 3 && (base.compare(0, 2, "ta") == 0 || base.compare(0, 2, "tb") == 0)) {
    int i;
    try {
      std::size_t used = 0;
      i = std::stoi(base.substr(2), &used);
      if (used != base.size() - 2) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("bad twist name " + name);
    }
    if (i < 1 || i > g) throw ParseError("twist handle out of range: " + name);
    t = base[1] == 'a' ? twists::t_alpha(g, i - 1) : twists::t_beta(g, i - 1);
  } else {
    throw ParseError("unknown twist " + name);
  }
  return inv ? t.inverse() : t;
}

/// {"genus", "images", "inverse_images"?} or {"genus", "twists": [names]} meaning t_1 o t_2 o ... .
inline MappingClass mapping_class_from_json(const json& j) {
  int g = static_cast<int>(to_int(field(j, "genus"), "genus"));
  if (g < 1) throw ParseError("genus must be positive");
  try {
    if (j.contains("twists")) {
      const json& tw = j.at("twists");
      if (!tw.is_array()) throw ParseError("twists must be an array of names");
      MappingClass f = MappingClass::identity_class(g);
      for (const auto& t : tw) {
        if (!t.is_string()) throw ParseError("twist names are strings");
        f = f.after(twist_from_name(t.get<std::string>(), g));
      }
      return f;
    }
    std::vector<FreeWord> imgs, inv;
    for (const auto& w : field(j, "images")) imgs.push_back(word_from_json(w));
    if (j.contains("inverse_images")) {
      for (const auto& w : j.at("inverse_images")) inv.push_back(word_from_json(w));
      return MappingClass::make(g, imgs, inv);
    }
    return MappingClass::make(g, imgs);
  } catch (const InvalidMappingClass& e) {
    throw ParseError(e.what());
  }
}

/// Letters "s<i>", "a<i>", "b<i>" (1-based), with a leading '-' for inverses.
inline BraidWord braid_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("a braid word is an array of letters");
  BraidWord w;
  for (const auto& e : j) {
    if (!e.is_string()) throw ParseError("braid letters are strings");
    std::string s = e.get<std::string>();
    BraidLetter l;
    if (!s.empty() && s[0] == '-') {
      l.sign = -1;
      s.erase(0, 1);
    }
    if (s.size() < 2) throw ParseError("bad braid letter " + e.dump());
    switch (s[0]) {
      case 's': l.kind = BraidLetter::Kind::sigma; break;
      case 'a': l.kind = BraidLetter::Kind::alpha; break;
      case 'b': l.kind = BraidLetter::Kind::beta; break;
      default: throw ParseError("bad braid letter " + e.dump());
    }
    try {
      std::size_t used = 0;
      l.index = std::stoi(s.substr(1), &used) - 1;
      if (used != s.size() - 1 || l.index < 0) throw std::invalid_argument("bad");
    } catch (const std::exception&) {
      throw ParseError("bad braid letter " + e.dump());
    }
    w.push_back(l);
  }
  return w;
}

inline json to_json(const BraidWord& w) {
  json j = json::array();
  for (const auto& l : w) {
    char c = l.kind == BraidLetter::Kind::sigma ? 's' : l.kind == BraidLetter::Kind::alpha ? 'a' : 'b';
    j.push_back((l.sign < 0 ? "-" : "") + std::string(1, c) + std::to_string(l.index + 1));
  }
  return j;
}

inline json to_json(const CycMatrix& A, int digits = 0) {
  json rows = json::array();
  for (std::size_t i = 0; i < A.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < A.cols(); ++j) r.push_back(to_json(A(i, j), digits));
    rows.push_back(r);
  }
  return rows;
}

}  // namespace abtqft::io
