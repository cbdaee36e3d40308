#include "abtqft/io.hpp"

#include <gtest/gtest.h>

using namespace abtqft;
using abtqft::io::json;
using abtqft::io::ParseError;

TEST(Io, CycNumRoundTrip) {
  for (const CycNum& x : {eta_kappa(5).eta, eta_kappa(3).kappa, CycNum(24, Rational(-7, 3)), CycNum::zero(8), q_power(12, 5)}) {
    json j = io::to_json(x);
    EXPECT_EQ(io::cycnum_from_json(io::parse_text(j.dump())), x);
  }
  EXPECT_EQ(io::to_json(eta_kappa(5).eta)["approx"], "0.447213595500");
  EXPECT_FALSE(io::to_json(CycNum::one(8), 0).contains("approx"));
}

TEST(Io, CycNumErrors) {
  EXPECT_THROW(io::cycnum_from_json(json(3)), ParseError);
  EXPECT_THROW(io::cycnum_from_json(json{{"order", 12}, {"coeffs", json::array({1, 0, 0, 0})}}), ParseError);
  EXPECT_THROW(io::cycnum_from_json(json{{"order", 8}, {"coeffs", json::array({1, 0})}}), ParseError);
  EXPECT_THROW(io::cycnum_from_json(json{{"order", 8}, {"coeffs", json::array({"1/0", 0, 0, 0})}}), ParseError);
  EXPECT_THROW(io::cycnum_from_json(json{{"coeffs", json::array()}}), ParseError);
  EXPECT_THROW(io::parse_text("{not json"), ParseError);
}

TEST(Io, PresentationRoundTrip) {
  SurgeryPresentation s{{{0, 1}, {1, 0}}, {{0, 3}}};
  EXPECT_EQ(io::presentation_from_json(io::to_json(s)), s);
  EXPECT_THROW(io::presentation_from_json(io::parse_text(R"({"B": [[1, 2], [3, 1]]})")), ParseError);
  EXPECT_THROW(io::presentation_from_json(io::parse_text(R"({"B": [[1, 2]]})")), ParseError);
  EXPECT_THROW(io::presentation_from_json(io::parse_text(R"({"B": [[1]], "fixed_colors": {"4": 1}})")), ParseError);
  EXPECT_THROW(io::presentation_from_json(io::parse_text(R"({"B": [[1.5]]})")), ParseError);
}

TEST(Io, ProgramRoundTrip) {
  CobordismProgram prog = make_program(CobObject::standard(1), {SimpleCob::cylinder({{1, 1}, {0, 1}}), SimpleCob::index1(1),
                                                                SimpleCob::index2(0, 2, 1)});
  CobordismProgram back = io::program_from_json(io::parse_text(io::to_json(prog).dump()));
  EXPECT_EQ(back.source, prog.source);
  EXPECT_EQ(back.steps, prog.steps);
  EXPECT_EQ(back.target, prog.target);
  EXPECT_THROW(io::step_from_json(io::parse_text(R"({"kind": "index3"})")), ParseError);
  EXPECT_THROW(io::object_from_json(io::parse_text(R"({"genus": 1, "L": [[1, 0], [0, 1]]})")), LagrangianError);
}

TEST(Io, SchrodingerRoundTrip) {
  const int p = 5;
  HeisContext ctx = HeisContext::standard(p, 2);
  SchrodingerVec v{ctx.pp(), 2, ctx.basis_vector({1, 3})};
  v.coeffs[7] = q_power(p, 2);
  SchrodingerVec back = io::schrodinger_from_json(io::parse_text(io::to_json(v).dump()), p);
  EXPECT_EQ(back.coeffs, v.coeffs);
  EXPECT_THROW(io::schrodinger_from_json(io::parse_text(R"({"genus": 1, "entries": [{"label": [0, 1]}]})"), p), ParseError);
  EXPECT_THROW(io::schrodinger_from_json(io::parse_text(R"({"genus": 1, "pprime": 3, "entries": []})"), p), ParseError);
}

TEST(Io, MappingClasses) {
  MappingClass s = io::mapping_class_from_json(io::parse_text(R"({"genus": 1, "twists": ["ta1", "tb1", "ta1"]})"));
  EXPECT_EQ(s.matrix(), twists::t_alpha(1, 0).after(twists::t_beta(1, 0)).after(twists::t_alpha(1, 0)).matrix());
  MappingClass back = io::mapping_class_from_json(io::to_json(s));
  EXPECT_EQ(back, s);
  EXPECT_EQ(io::twist_from_name("ta1^-1", 1), twists::t_alpha(1, 0).inverse());
  EXPECT_EQ(io::twist_from_name("tc", 2), twists::t_connect());
  EXPECT_THROW(io::twist_from_name("tc", 1), ParseError);
  EXPECT_THROW(io::twist_from_name("tb3", 2), ParseError);
  EXPECT_THROW(io::mapping_class_from_json(io::parse_text(R"({"genus": 1, "images": [[1], [1]]})")), ParseError);
}

TEST(Io, Braids) {
  BraidWord w = io::braid_from_json(io::parse_text(R"(["s1", "-a2", "b1"])"));
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[1].kind, BraidLetter::Kind::alpha);
  EXPECT_EQ(w[1].index, 1);
  EXPECT_EQ(w[1].sign, -1);
  BraidWord back = io::braid_from_json(io::to_json(w));
  ASSERT_EQ(back.size(), w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_EQ(back[i].kind, w[i].kind);
    EXPECT_EQ(back[i].index, w[i].index);
    EXPECT_EQ(back[i].sign, w[i].sign);
  }
  EXPECT_THROW(io::braid_from_json(io::parse_text(R"(["x1"])")), ParseError);
  EXPECT_THROW(io::braid_from_json(io::parse_text(R"(["a0"])")), ParseError);
}

TEST(Io, HeisenbergElements) {
  HeisContext ctx = HeisContext::standard(5, 1);
  HeisSplit h{2, {1}, {3}};
  EXPECT_EQ(io::heis_from_json(io::to_json(h), ctx), h);
  EXPECT_EQ(io::heis_from_json(io::parse_text(R"({"k": 1, "x": [1, 1]})"), ctx), ctx.to_finite({1, {1, 1}}));
  HeisIntegral hi{3, {2, -1}};
  EXPECT_EQ(io::heis_integral_from_json(io::to_json(hi)), hi);
  EXPECT_THROW(io::heis_from_json(io::parse_text(R"({"k": 1, "x": [1]})"), ctx), ParseError);
}
