#include <gtest/gtest.h>

#include "equicohom/bundle.hpp"
#include "support.hpp"

using namespace equicohom;
using testing_support::load;
using testing_support::load_json;

namespace {

std::string first_violation(const ValidationReport& r) { return r.ok() ? "" : r.violations.front(); }

}  // namespace

TEST(CoefficientSystem, FixturesAreValid) {
  for (const auto& name : testing_support::all_bundles()) {
    const auto b = load(name);
    EXPECT_TRUE(b.coefficients.validate().ok()) << name << ": " << first_violation(b.coefficients.validate());
  }
}

TEST(CoefficientSystem, NonConstantSystemIsCompletedFunctorially) {
  const auto b = load("theta_sign");
  const auto& oc = *b.category;
  const auto& c = b.coefficients;
  const auto swap = oc.morphism(oc.trivial(), oc.trivial(), oc.group().element("s"));
  EXPECT_EQ(c.m0.maps.at(swap), IntMatrix{{-1}});
  EXPECT_EQ(c.m0.maps.at(oc.identity(oc.trivial())), IntMatrix{{1}});
  EXPECT_EQ(c.module(oc.whole()).to_string(), "Z/2");
}

TEST(CoefficientSystem, MissingSubgroupDataIsAnError) {
  auto m0 = testing_support::load_json("theta_sign");
  m0["coefficients"]["M0"]["per_subgroup"].erase(1);
  EXPECT_THROW(parse_bundle(m0), ParseError);
  auto pi = testing_support::load_json("theta_z2");
  pi["coefficients"]["pi"] = {{"per_subgroup", {{{"subgroup", "trivial"}, {"group", "Z/2"}}}}};
  EXPECT_THROW(parse_bundle(pi), ParseError);
  auto phi = testing_support::load_json("theta_z2");
  phi["coefficients"]["phi"] = {{"per_subgroup", {{{"subgroup", "whole"}, {"action", {{"t", {{-1}}}}}}}}};
  EXPECT_THROW(parse_bundle(phi), ParseError);
}

TEST(CoefficientSystem, RejectsMapsThatAreNotWellDefined) {
  auto doc = load_json("theta_sign");
  doc["coefficients"]["M0"]["morphisms"][1]["matrix"] = {{1}};  // Z/2 -> Z, 1 -> 1
  EXPECT_THROW(parse_bundle(doc), ValidationError);
}

TEST(CoefficientSystem, RejectsPhiThatIsNotAHomomorphism) {
  auto doc = load_json("circle_twisted");
  doc["coefficients"]["phi"]["t"] = {{2}};
  EXPECT_THROW(parse_bundle(doc), ValidationError);
}

TEST(CoefficientSystem, RejectsPhiThatIsNotNatural) {
  auto doc = load_json("theta_sign");
  // Z with s acting by -1 and phi(t) = [[-1]]: natural. Make the G/e action nontrivial on a
  // second generator while phi swaps generators: not natural.
  doc["coefficients"]["M0"]["per_subgroup"][0]["generators"] = 2;
  doc["coefficients"]["M0"]["per_subgroup"][1]["generators"] = 0;
  doc["coefficients"]["M0"]["per_subgroup"][1]["relations"] = nlohmann::json::array();
  doc["coefficients"]["M0"]["morphisms"][0]["matrix"] = {{-1, 0}, {0, 1}};
  doc["coefficients"]["M0"]["morphisms"][1]["matrix"] = nlohmann::json::array({nlohmann::json::array(), nlohmann::json::array()});
  doc["coefficients"]["phi"] = {{"per_subgroup", {{{"subgroup", "trivial"}, {"action", {{"t", {{0, 1}, {1, 0}}}}}}}}};
  EXPECT_THROW(parse_bundle(doc), ValidationError);
}

TEST(Twisting, FixturesAreValid) {
  for (const auto& name : testing_support::all_bundles()) {
    const auto b = load(name);
    const auto r = validate_twisting(b.space, b.coefficients, b.raw);
    EXPECT_TRUE(r.ok()) << name << ": " << first_violation(r);
    if (b.paths) {
      const auto based = based_twisting(b.space, b.coefficients, b.raw, *b.paths);
      EXPECT_TRUE(validate_twisting(b.space, b.coefficients, based).ok()) << name;
    }
  }
}

TEST(Twisting, DetectsCocycleFailure) {
  auto doc = load_json("delta2_s3");
  doc["twisting"]["02"] = "120";
  const auto b = parse_bundle(doc);
  const auto r = validate_twisting(b.space, b.coefficients, b.raw);
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.violations.front().find("cocycle"), std::string::npos);
}

TEST(Twisting, DetectsNonEquivariantLabels) {
  auto doc = load_json("theta_z2");
  doc["twisting"] = {{"e1", "t"}};
  const auto b = parse_bundle(doc);
  const auto r = validate_twisting(b.space, b.coefficients, b.raw);
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.violations.front().find("natural"), std::string::npos);
}

TEST(Twisting, DerivedTwistingIsTheFirstEdgeLabel) {
  const auto b = load("cone_theta");
  const auto& s = b.space.base();
  const auto t1 = *s.find("t1");
  const auto& pi = b.coefficients.group(0);
  // Vertices (c, a, b): the 01-edge is ca.
  EXPECT_EQ(derive_kappa_q(b.space, b.coefficients, b.raw, 0, FormalSimplex{t1}), pi.element("t"));
  // s1 t1 keeps the 01-edge, s0 t1 makes it degenerate.
  EXPECT_EQ(derive_kappa_q(b.space, b.coefficients, b.raw, 0, s.degeneracy(FormalSimplex{t1}, 1)), pi.element("t"));
  EXPECT_EQ(derive_kappa_q(b.space, b.coefficients, b.raw, 0, s.degeneracy(FormalSimplex{t1}, 0)), pi.identity());
}

TEST(Holonomy, CircleLoop) {
  const auto b = load("circle_twisted");
  const auto& pi = b.coefficients.group(0);
  const EdgePath loop{{0, true}};
  EXPECT_EQ(holonomy(b.coefficients, b.raw, 0, loop), pi.element("t"));
  EXPECT_EQ(holonomy(b.coefficients, b.raw, 0, reverse_path(loop)), pi.element("t"));
  EXPECT_EQ(holonomy(b.coefficients, b.raw, 0, {{0, true}, {0, true}}), pi.identity());
}

TEST(Holonomy, NonAbelianOrder) {
  const auto b = load("delta2_s3");
  const auto& s = b.space.base();
  const auto& pi = b.coefficients.group(0);
  const int e01 = s.find("01")->index, e12 = s.find("12")->index, e02 = s.find("02")->index;
  // Around the triangle 0 -> 1 -> 2 -> 0 the labels compose to the identity.
  EXPECT_EQ(holonomy(b.coefficients, b.raw, 0, {{e01, true}, {e12, true}, {e02, false}}), pi.identity());
  EXPECT_EQ(holonomy(b.coefficients, b.raw, 0, {{e01, true}, {e12, true}}), b.raw.edge(0, e02));
}

TEST(PathSystem, AutomaticSystemsAreValid) {
  for (const auto& name : testing_support::connected_bundles()) {
    const auto b = load(name);
    ASSERT_TRUE(b.paths) << name;
    EXPECT_TRUE(validate_path_system(b.space, *b.paths).ok()) << name << ": "
                                                              << first_violation(validate_path_system(b.space, *b.paths));
  }
}

TEST(PathSystem, BasedTwistingIsTrivialAlongChosenPaths) {
  for (const auto& name : testing_support::connected_bundles()) {
    const auto b = load(name);
    const auto based = based_twisting(b.space, b.coefficients, b.raw, *b.paths);
    for (int v = 0; v < b.space.base().count(0); ++v) {
      const int h = b.space.stabilizer({0, v});
      EXPECT_EQ(holonomy(b.coefficients, based, h, b.paths->paths[v]), b.coefficients.group(h).identity()) << name;
    }
  }
}

TEST(PathSystem, BasedTwistingKeepsLoopHolonomy) {
  const auto b = load("theta_z2");
  const auto& s = b.space.base();
  const auto based = based_twisting(b.space, b.coefficients, b.raw, *b.paths);
  const int e1 = s.find("e1")->index, f = s.find("f")->index;
  const EdgePath loop{{e1, true}, {f, false}};  // a -> b -> a
  EXPECT_EQ(holonomy(b.coefficients, based, 0, loop), holonomy(b.coefficients, b.raw, 0, loop));
}

TEST(PathSystem, ValidationCatchesBadSystems) {
  const auto b = load("theta_z2");
  const auto& s = b.space.base();
  PathSystem ps = *b.paths;
  ps.paths[s.find("a")->index] = {{s.find("f")->index, true}, {s.find("f")->index, false}};
  EXPECT_FALSE(validate_path_system(b.space, ps).ok());
  ps = *b.paths;
  ps.paths[s.find("b")->index] = {{s.find("e1")->index, true}};  // e1 is not fixed by Z/2
  EXPECT_FALSE(validate_path_system(b.space, ps).ok());
  ps = *b.paths;
  ps.base_vertex = s.find("b")->index;
  EXPECT_FALSE(validate_path_system(b.space, ps).ok());
}

TEST(PathSystem, BaseVertexMustBeFixed) {
  const auto b = load("free_circle_z2");
  EXPECT_THROW(auto_path_system(b.space, 0), HypothesisViolation);
}

TEST(PathSystem, UnreachableVertexIsReported) {
  auto doc = load_json("circle_trivial");
  doc["simplices"][0].push_back("w");
  EXPECT_THROW(parse_bundle(doc), PathMissing);
  doc.erase("path_system");
  const auto b = parse_bundle(doc);
  EXPECT_FALSE(b.space.is_G_connected());
}

TEST(CoefficientMorphism, PathFrameIdentifiesAlongChosenPaths) {
  const auto b = load("theta_z2");
  const auto& oc = *b.category;
  const auto& s = b.space.base();
  const int a = s.find("a")->index, bv = s.find("b")->index;
  // In the path-system frame, transport along a chosen path is the identity.
  const auto m = coefficient_morphism(b.space, b.coefficients, b.raw, &*b.paths, Frame::path_system,
                                      oc.identity(oc.trivial()), b.paths->paths[bv], a);
  EXPECT_TRUE(hom_equal(m, AbHom::identity(b.coefficients.module(oc.trivial()))));
  // In the vertex frame the raw labels act.
  const EdgePath via_e1{{s.find("e1")->index, true}};
  const auto raw = coefficient_morphism(b.space, b.coefficients, b.raw, nullptr, Frame::vertex,
                                        oc.identity(oc.trivial()), via_e1, a);
  EXPECT_EQ(raw.matrix, IntMatrix{{-1}});
  EXPECT_THROW(coefficient_morphism(b.space, b.coefficients, b.raw, nullptr, Frame::path_system,
                                    oc.identity(oc.trivial()), via_e1, a),
               HypothesisViolation);
}
