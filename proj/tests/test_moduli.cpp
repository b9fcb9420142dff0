#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "subreg/moduli.hpp"

#include <cmath>

using namespace subreg;

namespace {

Vec v1(double a) {
  Vec v(1);
  v[0] = a;
  return v;
}

const Space line{1, NormKind::Sup};
const Vec zero = Vec::Zero(1);

Box unit_box() {
  Box box;
  box.sides = {Interval{0.0, 1.0}};
  return box;
}

}  // namespace

TEST_CASE("empirical_subreg_at") {
  SUBCASE("identity has ratio exactly one") {
    const SetValuedMap F = lift(identity_map(line));
    const Grid grid = Grid::centered(zero, 0.5, 101);
    const Grid inverse = Grid::centered(zero, 1.0, 201);
    const ModulusEstimate est =
        empirical_subreg_at(F, zero, zero, 0.5, grid, inverse);
    CHECK(est.value == 1.0);
    CHECK(est.sample_count == 101);
  }
  SUBCASE("paper_f is metrically subregular with modulus ~1") {
    const SetValuedMap F = lift(paper_f_map());
    const Grid grid = Grid::centered(zero, 0.5, 201);
    const Grid inverse = Grid::centered(zero, 1.0, 401);
    const ModulusEstimate est =
        empirical_subreg_at(F, zero, zero, 0.5, grid, inverse);
    CHECK(est.value >= 1.0 - 2 * est.grid_step);
    CHECK(est.value <= 1.0 + 2 * est.grid_step);
  }
  SUBCASE("cubic flattening blows the ratio up under a tight membership tol") {
    SingleValuedMap cubic{line, line, RuleCubic{}, {}};
    const SetValuedMap F = lift(cubic);
    const Grid grid = Grid::centered(zero, 0.1, 201);
    const Grid inverse = Grid::centered(zero, 0.2, 401);
    SweepOptions opt;
    opt.membership_tol = 1e-9;  // only |u|^3 <= tol counts as a solution
    const ModulusEstimate est =
        empirical_subreg_at(F, zero, zero, 0.1, grid, inverse, opt);
    CHECK(est.value >= 100.0);
  }
  SUBCASE("center must lie on the graph") {
    const SetValuedMap F = lift(identity_map(line));
    const Grid grid = Grid::centered(v1(1.0), 0.5, 11);
    CHECK_THROWS_AS(
        empirical_subreg_at(F, v1(1.0), v1(0.0), 0.5, grid, grid),
        std::invalid_argument);
  }
}

TEST_CASE("empirical_strong_at") {
  SUBCASE("identity is exactly one") {
    const SetValuedMap F = lift(identity_map(line));
    const Grid grid = Grid::centered(zero, 2.0, 401);
    CHECK(empirical_strong_at(F, zero, zero, 2.0, grid).value == 1.0);
  }
  SUBCASE("cubic ratio is 1/x^2 at the smallest nonzero grid point") {
    SingleValuedMap cubic{line, line, RuleCubic{}, {}};
    const SetValuedMap F = lift(cubic);
    const Grid grid = Grid::centered(zero, 0.1, 201);  // step 1e-3
    const ModulusEstimate est = empirical_strong_at(F, zero, zero, 0.1, grid);
    CHECK(est.value == doctest::Approx(1e6).epsilon(1e-9));
    CHECK(std::abs(est.witness.at("x")[0]) ==
          doctest::Approx(1e-3).epsilon(1e-9));
  }
  SUBCASE("paper_h diverges like 1/|x|") {
    const SetValuedMap H = lift(paper_h_map());
    const Grid grid = Grid::centered(zero, 0.1, 2001);  // step 1e-4
    const ModulusEstimate est = empirical_strong_at(H, zero, zero, 0.1, grid);
    CHECK(est.value >= 0.9e4);
  }
  SUBCASE("a second solution inside the window forces +inf") {
    const SetValuedMap F = lift(paper_f_map());  // F(x) = {0} for x <= 0
    const Grid grid = Grid::centered(zero, 0.5, 101);
    const ModulusEstimate est = empirical_strong_at(F, zero, zero, 0.5, grid);
    CHECK(std::isinf(est.value));
    CHECK(est.witness.at("x")[0] < 0.0);
  }
}

TEST_CASE("empirical_strong_around") {
  SUBCASE("identity is exactly one") {
    const SetValuedMap F = lift(identity_map(line));
    AroundGrids grids{Grid::centered(zero, 1.0, 101), 0.02, 21};
    const ModulusEstimate est =
        empirical_strong_around(F, zero, zero, 1.0, 1.0, 0.1, grids);
    CHECK(est.value == 1.0);
    CHECK(est.sample_count > 0);
  }
  SUBCASE("paper_f is not strongly subregular around the origin") {
    const SetValuedMap F = lift(paper_f_map());
    AroundGrids grids{Grid::centered(zero, 0.5, 101), 0.01, 21};
    const ModulusEstimate est =
        empirical_strong_around(F, zero, zero, 0.5, 0.5, 0.1, grids);
    CHECK(std::isinf(est.value));
    // witness: a graph point on the flat branch with a distinct nearby u
    CHECK(est.witness.at("x")[0] <= 0.0);
    CHECK(est.witness.at("u") != est.witness.at("x"));
  }
  SUBCASE("projection map is identity-like in the interior") {
    const SetValuedMap G = sum(identity_map(line), normal_cone_box(unit_box()));
    AroundGrids grids{Grid::centered(v1(0.5), 0.2, 201), 0.002, 41};
    const ModulusEstimate est = empirical_strong_around(
        G, v1(0.5), v1(0.5), 0.2, 0.2, 0.05, grids);
    CHECK(est.value >= 1.0 - 2 * est.grid_step);
    CHECK(est.value <= 1.0 + 2 * est.grid_step);
  }
  SUBCASE("an empty window is an error") {
    const SetValuedMap N = normal_cone_box(unit_box());
    AroundGrids grids{Grid::over_box({{2.0, 3.0}}, {11}), 0.1, 5};
    CHECK_THROWS_AS(empirical_strong_around(N, v1(0.5), zero, 0.1, 0.1, 0.05,
                                            grids),
                    std::runtime_error);
  }
}

TEST_CASE("empirical_calmness") {
  SUBCASE("paper_g has modulus radius") {
    const ModulusEstimate est = empirical_calmness(
        paper_g_map(), zero, 0.5, Grid::centered(zero, 0.5, 201));
    CHECK(est.value == 0.5);
  }
  SUBCASE("linear slope is recovered to rounding accuracy") {
    const ModulusEstimate est = empirical_calmness(
        scale_map(line, 3.0), zero, 1.0, Grid::centered(zero, 1.0, 101));
    CHECK(est.value == doctest::Approx(3.0).epsilon(1e-15));
    // a power-of-two slope has no rounding at all
    const ModulusEstimate exact = empirical_calmness(
        scale_map(line, 2.0), zero, 1.0, Grid::centered(zero, 1.0, 101));
    CHECK(exact.value == 2.0);
  }
  SUBCASE("constants are exactly zero") {
    const ModulusEstimate est = empirical_calmness(
        constant_map(line, v1(4.0)), zero, 1.0, Grid::centered(zero, 1.0, 101));
    CHECK(est.value == 0.0);
  }
}

TEST_CASE("empirical_lipschitz") {
  SUBCASE("half sine on [-1,1]") {
    const SingleValuedMap g = linear_sin_map(line, 0.0, 0.5);
    const Grid grid = Grid::over_box({{-1.0, 1.0}}, {201});
    const ModulusEstimate est = empirical_lipschitz(g, grid);
    CHECK(std::abs(est.value - 0.5) <= 1e-3);
  }
  SUBCASE("identity and constants") {
    const Grid grid = Grid::over_box({{-1.0, 1.0}}, {51});
    CHECK(empirical_lipschitz(identity_map(line), grid).value == 1.0);
    CHECK(empirical_lipschitz(constant_map(line, v1(2.0)), grid).value == 0.0);
    CHECK_THROWS_AS(empirical_lipschitz(identity_map(line),
                                        Grid::over_box({{0.0, 0.0}}, {1})),
                    std::invalid_argument);
  }
}

TEST_CASE("equi_continuity_modulus") {
  const EquiGrids grids{Grid::centered(zero, 0.1, 21),
                        Grid::centered(zero, 0.1, 21)};
  SUBCASE("additive parameter cancels exactly") {
    const auto f = parametric_map(line, identity_map(line),
                                  CouplingKind::AdditiveT, 1.0);
    CHECK(equi_continuity_modulus(f, zero, zero, 0.1, grids).value == 0.0);
  }
  SUBCASE("multiplicative parameter gives |s|") {
    const auto f =
        parametric_map(line, zero_map(line), CouplingKind::ScaleX, 1.0);
    const ModulusEstimate est = equi_continuity_modulus(f, zero, zero, 0.1, grids);
    CHECK(est.value == doctest::Approx(0.1).epsilon(1e-9));
  }
  SUBCASE("parameter-free maps cancel exactly") {
    const auto f = parametric_map(line, paper_g_map(), CouplingKind::None, 0.0);
    CHECK(equi_continuity_modulus(f, zero, zero, 0.1, grids).value == 0.0);
  }
}

TEST_CASE("divergence_profile") {
  SUBCASE("paper_h grows at least 9x per decade") {
    const auto profile =
        divergence_profile(lift(paper_h_map()), zero, zero, {0.1, 0.01, 0.001},
                           DivergenceMode::StrongAt, 201);
    REQUIRE(profile.size() == 3);
    CHECK(profile[1].value / profile[0].value >= 9.0);
    CHECK(profile[2].value / profile[1].value >= 9.0);
  }
  SUBCASE("identity stays at one") {
    const auto profile =
        divergence_profile(lift(identity_map(line)), zero, zero,
                           {0.1, 0.01, 0.001}, DivergenceMode::StrongAt, 101);
    for (const auto& est : profile) CHECK(est.value == 1.0);
  }
  SUBCASE("paper_f subregularity estimates are stable under refinement") {
    const auto profile =
        divergence_profile(lift(paper_f_map()), zero, zero, {0.1, 0.01, 0.001},
                           DivergenceMode::SubregAt, 201);
    for (const auto& est : profile) {
      CHECK(est.value == doctest::Approx(1.0).epsilon(0.02));
    }
  }
  SUBCASE("radii must decrease strictly") {
    CHECK_THROWS_AS(divergence_profile(lift(identity_map(line)), zero, zero,
                                       {0.1, 0.1}, DivergenceMode::StrongAt, 11),
                    std::invalid_argument);
  }
}

TEST_CASE("witness replay reproduces every reported supremum") {
  const SetValuedMap maps[] = {lift(identity_map(line)), lift(paper_h_map()),
                               sum(identity_map(line), normal_cone_box(unit_box()))};
  const Vec centers[] = {zero, zero, v1(0.5)};
  const Vec values[] = {zero, zero, v1(0.5)};
  for (int i = 0; i < 3; ++i) {
    const double radius = i == 2 ? 0.2 : 0.1;
    const Grid grid = Grid::centered(centers[i], radius, 201);
    const ModulusEstimate strong =
        empirical_strong_at(maps[i], centers[i], values[i], radius, grid);
    const double replay =
        replay_strong_at(maps[i], centers[i], values[i], strong);
    if (std::isinf(strong.value)) {
      CHECK(std::isinf(replay));
    } else {
      CHECK(std::abs(replay - strong.value) <= 1e-12 * (1.0 + strong.value));
    }

    AroundGrids agrids{Grid::centered(centers[i], radius, 101), radius / 50, 21};
    const ModulusEstimate around = empirical_strong_around(
        maps[i], centers[i], values[i], radius, radius, radius / 4, agrids);
    const double around_replay =
        replay_strong_around(maps[i], values[i], radius, around);
    if (std::isinf(around.value)) {
      CHECK(std::isinf(around_replay));
    } else {
      CHECK(std::abs(around_replay - around.value) <=
            1e-12 * (1.0 + around.value));
    }
  }

  const ModulusEstimate calm = empirical_calmness(
      paper_g_map(), zero, 0.5, Grid::centered(zero, 0.5, 101));
  CHECK(replay_calmness(paper_g_map(), zero, calm) == calm.value);

  const ModulusEstimate lip = empirical_lipschitz(
      linear_sin_map(line, 0.0, 0.5), Grid::over_box({{-1.0, 1.0}}, {101}));
  CHECK(replay_lipschitz(linear_sin_map(line, 0.0, 0.5), lip) == lip.value);

  const auto f = parametric_map(line, zero_map(line), CouplingKind::ScaleX, 1.0);
  const EquiGrids egrids{Grid::centered(zero, 0.1, 21),
                         Grid::centered(zero, 0.1, 21)};
  const ModulusEstimate equi = equi_continuity_modulus(f, zero, zero, 0.1, egrids);
  CHECK(replay_equi_continuity(f, zero, equi) == equi.value);
}

TEST_CASE("grid refinement never decreases a supremum estimate") {
  const SetValuedMap maps[] = {lift(paper_h_map()),
                               lift(linear_sin_map(line, 1.0, 0.5)),
                               sum(identity_map(line), normal_cone_box(unit_box()))};
  const Vec centers[] = {zero, zero, v1(0.5)};
  const Vec values[] = {zero, zero, v1(0.5)};
  for (int i = 0; i < 3; ++i) {
    const double radius = i == 2 ? 0.2 : 0.1;
    const int steps = 101;
    const Grid coarse = Grid::centered(centers[i], radius, steps);
    const Grid fine = Grid::centered(centers[i], radius, 2 * steps - 1);
    const double est_coarse =
        empirical_strong_at(maps[i], centers[i], values[i], radius, coarse).value;
    const double est_fine =
        empirical_strong_at(maps[i], centers[i], values[i], radius, fine).value;
    CHECK(est_fine >= est_coarse);  // the fine grid nests the coarse one
  }
}

TEST_CASE("range scaling divides empirical_strong_at by exactly c") {
  oracle::Rng rng(41);
  const SetValuedMap base[] = {lift(identity_map(line)),
                               lift(linear_sin_map(line, 1.0, 0.25)),
                               lift(paper_h_map())};
  for (int trial = 0; trial < 30; ++trial) {
    const int which = rng.pick(3);
    const double c = std::ldexp(1.0, rng.pick(7) - 3);  // powers of two
    const SetValuedMap& F = base[static_cast<size_t>(which)];
    const SetValuedMap scaled = scale_range(c, F);
    const Grid grid = Grid::centered(zero, 0.1, 101);
    const double plain = empirical_strong_at(F, zero, zero, 0.1, grid).value;
    const double scaled_est =
        empirical_strong_at(scaled, zero, zero, 0.1, grid).value;
    if (std::isinf(plain)) {
      CHECK(std::isinf(scaled_est));
    } else {
      CHECK(scaled_est == plain / c);
    }
  }
}

TEST_CASE("subregular and strong estimates agree for invertible maps") {
  // F^{-1}(0) = {0} forces both numerators to agree when the membership
  // tolerance admits only the true solution.
  const SetValuedMap maps[] = {lift(identity_map(line)),
                               lift(scale_map(line, 2.0)),
                               lift(linear_sin_map(line, 1.0, 0.25))};
  for (const SetValuedMap& F : maps) {
    const Grid grid = Grid::centered(zero, 0.5, 201);
    const Grid inverse = Grid::centered(zero, 1.0, 401);
    SweepOptions opt;
    opt.membership_tol = 1e-12;
    const double subreg =
        empirical_subreg_at(F, zero, zero, 0.5, grid, inverse, opt).value;
    const double strong = empirical_strong_at(F, zero, zero, 0.5, grid).value;
    CHECK(subreg == strong);
  }
}

TEST_CASE("parallel sweeps are bit-identical to sequential ones") {
  const SetValuedMap H = lift(paper_h_map());
  const Grid grid = Grid::centered(zero, 0.1, 1001);
  SweepOptions seq;
  seq.threads = 1;
  SweepOptions par;
  par.threads = 8;
  const ModulusEstimate a = empirical_strong_at(H, zero, zero, 0.1, grid, seq);
  const ModulusEstimate b = empirical_strong_at(H, zero, zero, 0.1, grid, par);
  CHECK(a.value == b.value);
  CHECK(a.sample_count == b.sample_count);
  CHECK(a.witness.at("x") == b.witness.at("x"));
}
