#include "fixtures.hpp"

#include "voxto/grid.hpp"

#include <doctest.h>

using namespace voxto;
using voxto::testing::Rng;

namespace {

Problem well_formed(const Dims& d) {
  Problem p = Problem::blank(d);
  for (int c = 0; c < 3; ++c) p.dirichlet(c, 0, 0, 0) = 1;
  p.design(0, 0, 0, 0) = 1;
  p.forces(2, d.nx - 1, d.ny - 1, d.nz - 1) = -1e6;
  p.design(0, d.nx - 1, d.ny - 1, d.nz - 1) = 1;
  p.volume_fraction_max = 0.3;
  return p;
}

}  // namespace

TEST_CASE("tensor indexing is z-fastest and channel-major") {
  RealTensor t(2, {2, 3, 4});
  t(1, 1, 2, 3) = 7.0;
  CHECK(t.values()[24 + (1 * 3 + 2) * 4 + 3] == 7.0);
  CHECK(t.at(1, Dims{2, 3, 4}.index(1, 2, 3)) == 7.0);
  CHECK_THROWS_AS(RealTensor(1, {0, 2, 2}), DimensionError);
}

TEST_CASE("validate_problem: paper-scale well-formed problem is valid") {
  const Problem p = well_formed({39, 39, 21});
  CHECK(p.material.young_modulus == 70e9);
  CHECK(p.material.poisson_ratio == 0.3);
  CHECK(p.material.yield_stress == 450e6);
  const ValidationReport r = validate_problem(p);
  CHECK(r.ok());
}

TEST_CASE("validate_problem: load on a free voxel") {
  Problem p = well_formed({4, 4, 4});
  p.forces(0, 2, 2, 2) = 5.0;
  const ValidationReport r = validate_problem(p);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].code == "design_at_loads");
  CHECK(r.violations[0].message == "design must be 1 at loads");
}

TEST_CASE("validate_problem: design value 2 breaks the ternary domain") {
  Problem p = well_formed({4, 4, 4});
  p.design(0, 1, 1, 1) = 2;
  const ValidationReport r = validate_problem(p);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].code == "design_domain");
  CHECK(r.violations[0].message.find("ternary") != std::string::npos);
}

TEST_CASE("validate_problem: shape mismatch is structural") {
  Problem p = well_formed({4, 4, 4});
  p.forces = RealTensor(3, {4, 4, 3});
  CHECK_THROWS_AS(validate_problem(p), DimensionError);
  p = well_formed({4, 4, 4});
  p.dirichlet = ByteTensor(2, {4, 4, 4});
  CHECK_THROWS_AS(validate_problem(p), DimensionError);
}

TEST_CASE("validate_problem: each single mutation yields exactly one violation") {
  Rng rng(11);
  struct Mutation {
    const char* code;
    void (*apply)(Problem&);
  };
  const Mutation mutations[] = {
      {"young_modulus", [](Problem& p) { p.material.young_modulus = 0.0; }},
      {"poisson_ratio", [](Problem& p) { p.material.poisson_ratio = 0.5; }},
      {"yield_stress", [](Problem& p) { p.material.yield_stress = -1.0; }},
      {"penalization", [](Problem& p) { p.material.penalization_p = 1.0; }},
      {"rho_min", [](Problem& p) { p.material.rho_min = 0.0; }},
      {"voxel_size", [](Problem& p) { p.voxel_size.y() = 0.0; }},
      {"volume_fraction", [](Problem& p) { p.volume_fraction_max = 1.5; }},
      {"design_domain", [](Problem& p) { p.design.at(0, 1) = -2; }},
      {"dirichlet_domain", [](Problem& p) {
         for (std::size_t v = 0; v < p.dims.count(); ++v)
           if (p.dirichlet.at(0, v)) { p.dirichlet.at(0, v) = 2; return; }
       }},
      {"force_finite", [](Problem& p) {
         for (std::size_t v = 0; v < p.dims.count(); ++v)
           if (p.has_load(v)) { p.forces.at(1, v) = std::nan(""); return; }
       }},
      {"design_at_supports", [](Problem& p) {
         for (std::size_t v = 0; v < p.dims.count(); ++v)
           if (p.has_support(v) && !p.has_load(v)) { p.design.at(0, v) = -1; return; }
       }},
      {"design_at_loads", [](Problem& p) {
         for (std::size_t v = 0; v < p.dims.count(); ++v)
           if (p.has_load(v) && !p.has_support(v)) { p.design.at(0, v) = 0; return; }
       }},
      {"no_supports", [](Problem& p) { p.dirichlet.values().setZero(); }},
      {"no_loads", [](Problem& p) { p.forces.values().setZero(); }},
  };
  for (int trial = 0; trial < 20; ++trial) {
    Problem base = testing::random_problem(rng, {5, 4, 3});
    // Keep the set-valued mutations unambiguous: one support voxel, one load voxel, disjoint.
    base.dirichlet.values().setZero();
    base.forces.values().setZero();
    for (int c = 0; c < 3; ++c) base.dirichlet.at(c, 0) = 1;
    base.design.at(0, 0) = 1;
    base.forces.at(2, base.dims.count() - 1) = 3.0;
    base.design.at(0, base.dims.count() - 1) = 1;
    REQUIRE(validate_problem(base).ok());
    for (const auto& m : mutations) {
      Problem p = base;
      m.apply(p);
      const ValidationReport r = validate_problem(p);
      INFO("mutation " << m.code);
      REQUIRE(r.violations.size() == 1);
      CHECK(r.violations[0].code == m.code);
    }
  }
}

TEST_CASE("validate_problem is pure") {
  Rng rng(3);
  const Problem p = testing::random_problem(rng, {4, 4, 4});
  const Problem copy = p;
  (void)validate_problem(p);
  CHECK(p == copy);
}

TEST_CASE("binarize: examples") {
  const Dims d{3, 3, 3};
  TernaryTensor design(1, d, -1);
  design.at(0, 0) = 1;
  design.at(0, 1) = 0;

  const Mask ones = binarize(DensityField(1, d, 1.0), design);
  CHECK(ones.at(0, 1) == 0);
  for (std::size_t v = 0; v < d.count(); ++v)
    if (v != 1) CHECK(ones.at(0, v) == 1);

  const Mask low = binarize(DensityField(1, d, 1e-3), design);
  for (std::size_t v = 0; v < d.count(); ++v) CHECK(low.at(0, v) == (v == 0 ? 1 : 0));
}

TEST_CASE("binarize matches a per-voxel oracle and is idempotent on masks") {
  Rng rng(5);
  const Dims d{6, 5, 4};
  for (int trial = 0; trial < 50; ++trial) {
    TernaryTensor design(1, d);
    for (std::size_t v = 0; v < d.count(); ++v) design.at(0, v) = static_cast<std::int8_t>(testing::uniform_int(rng, -1, 1));
    const DensityField rho = testing::random_density(rng, d, 0.0, 1.0);
    const double t = testing::uniform(rng, 0.05, 0.95);
    const Mask m = binarize(rho, design, t);
    for (std::size_t v = 0; v < d.count(); ++v) {
      const int code = design.at(0, v);
      const int want = code == 0 ? 0 : (code == 1 ? 1 : (rho.at(0, v) >= t ? 1 : 0));
      REQUIRE(m.at(0, v) == want);
    }
    const double t2 = testing::uniform(rng, 0.01, 0.99);
    CHECK(binarize(m.cast<double>(), design, t2) == m);
  }
}

TEST_CASE("count_design") {
  TernaryTensor design(1, {2, 2, 1}, -1);
  design.at(0, 0) = 0;
  design.at(0, 3) = 1;
  const DesignCounts c = count_design(design);
  CHECK(c.free == 2);
  CHECK(c.void_ == 1);
  CHECK(c.solid == 1);
}
