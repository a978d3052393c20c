#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "plspread/errors.hpp"
#include "plspread/pde_evolve.hpp"
#include "plspread/shooting.hpp"

using namespace plspread;

namespace {
const Rheology R2 = make_rheology(2.0);
const double kSqrt2 = std::sqrt(2.0);

Field1D parabola(std::size_t n, double lo = -2.0, double hi = 2.0) {
  return init_drop(DropShape::Parabola, 4.0 * kSqrt2 / 3.0, {-kSqrt2, kSqrt2},
                   make_grid(lo, hi, n));
}

Field1D smooth(std::size_t n, double amp = 1.0) {
  Field1D f;
  f.grid = make_grid(-1.0, 1.0, n);
  f.u.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.u[i] = amp * (1.0 + 0.5 * std::cos(M_PI * f.grid.node(i)));
  f.mass = trapezoid_mass(f.grid, f.u);
  return f;
}

const PhysicalProfile& zero_angle_profile() {
  static const PhysicalProfile p = [] {
    const auto res = continue_to_zero_delta(Geometry::Planar, R2, 0.0, default_schedule());
    return to_physical(res, R2, Geometry::Planar);
  }();
  return p;
}
}  // namespace

TEST_SUITE("pde_evolve") {

TEST_CASE("grid") {
  const Grid g = make_grid(-1.0, 1.0, 5);
  CHECK(g.h() == 0.5);
  CHECK(g.node(4) == 1.0);
  CHECK_THROWS_AS(make_grid(-1.0, 1.0, 4), DomainError);
  CHECK_THROWS_AS(make_grid(1.0, 1.0, 10), DomainError);
  CHECK(trapezoid_mass(make_grid(0.0, 1.0, 11), std::vector<double>(11, 2.0)) ==
        doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("initial drops") {
  const Field1D p = parabola(2001);
  CHECK(p.mass == doctest::Approx(4.0 * kSqrt2 / 3.0).epsilon(1e-14));
  for (std::size_t i = 0; i < p.u.size(); ++i) {
    const double x = p.grid.node(i);
    CHECK(std::abs(p.u[i] - std::max(0.0, 1.0 - x * x / 2.0)) < 1e-5);
  }
  const Field1D r = init_drop(DropShape::Rectangle, 1.0, {-0.5, 0.5}, make_grid(-1.0, 1.0, 201));
  CHECK(r.mass == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(*std::max_element(r.u.begin(), r.u.end()) == doctest::Approx(1.0).epsilon(2e-2));
  CHECK(r.u.front() == 0.0);
  CHECK(r.u.back() == 0.0);

  const Grid g = make_grid(-1.0, 1.0, 101);
  CHECK_THROWS_AS(init_drop(DropShape::Rectangle, 1.0, {-2.0, 0.5}, g), DomainError);
  CHECK_THROWS_AS(init_drop(DropShape::Rectangle, 1.0, {0.5, -0.5}, g), DomainError);
  CHECK_THROWS_AS(init_drop(DropShape::Rectangle, -1.0, {-0.5, 0.5}, g), DomainError);
  CHECK_THROWS_AS(init_drop(DropShape::Rectangle, std::nullopt, {-0.5, 0.5}, g), DomainError);
  CHECK_THROWS_AS(init_drop(DropShape::SelfSimilarSnapshot, std::nullopt, {0.0, 0.0}, g),
                  DomainError);
  CHECK_THROWS_AS(init_drop(DropShape::SelfSimilarSnapshot, std::nullopt, {0.0, 0.0}, g,
                            &zero_angle_profile(), 1.0),
                  DomainError);  // support 1.16 does not fit [-1, 1]
}

TEST_CASE("zero field does not move") {
  Field1D z;
  z.grid = make_grid(0.0, 1.0, 21);
  z.u.assign(21, 0.0);
  const Field1D e = step(z, R2, 1e-3);
  CHECK(e.u == z.u);
  CHECK(suggest_dt(z, R2) == PdeOptions{}.dt_max);
  const auto i = step_implicit(z, R2, 1e-3);
  REQUIRE(i.has_value());
  CHECK(i->u == z.u);
}

TEST_CASE("explicit step conserves mass") {
  for (Mobility m : {Mobility::Arithmetic, Mobility::Minimum, Mobility::Upwind}) {
    PdeOptions opt;
    opt.mobility = m;
    const Field1D p = parabola(401);
    const Field1D q = step(p, R2, suggest_dt(p, R2, opt), opt);
    CHECK(std::abs(q.mass - q.clipped - p.mass) <= 1e-15 * p.mass);
    CHECK(std::abs(trapezoid_mass(q.grid, q.u) - q.mass) <= 1e-15 * p.mass);
    for (double v : q.u) CHECK(v >= 0.0);
  }
}

TEST_CASE("symmetric data stays symmetric") {
  Field1D f = init_drop(DropShape::Parabola, 1.0, {-0.8, 0.8}, make_grid(-1.0, 1.0, 201));
  for (int k = 0; k < 100; ++k) f = step(f, R2, suggest_dt(f, R2));
  const std::size_t n = f.u.size();
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i) asym = std::max(asym, std::abs(f.u[i] - f.u[n - 1 - i]));
  CHECK(asym < 1e-13);
  CHECK(f.steps == 100);
}

TEST_CASE("suggested time step scaling") {
  // h^4 scaling on smooth data
  const double r1 = suggest_dt(smooth(201), R2) / suggest_dt(smooth(401), R2);
  const double r2 = suggest_dt(smooth(401), R2) / suggest_dt(smooth(801), R2);
  CHECK(r1 == doctest::Approx(16.0).epsilon(0.02));
  CHECK(r2 == doctest::Approx(16.0).epsilon(0.02));
  // amplitude enters through u^(lambda+2) |d3|^(lambda-1): 2^5 for lambda = 2
  for (Mobility m : {Mobility::Arithmetic, Mobility::Minimum, Mobility::Upwind}) {
    PdeOptions opt;
    opt.mobility = m;
    const Field1D p = parabola(401);
    Field1D q = p;
    for (double& v : q.u) v *= 2.0;
    CHECK(suggest_dt(p, R2, opt) / suggest_dt(q, R2, opt) == doctest::Approx(32.0).epsilon(1e-12));
  }
}

TEST_CASE("explicit step refuses unstable or corrupt input") {
  const Field1D p = parabola(201);
  const double dt = suggest_dt(p, R2);
  CHECK_THROWS_AS(step(p, R2, 10.0 * dt / PdeOptions{}.c_safe), StabilityError);
  CHECK_THROWS_AS(step(p, R2, 0.0), DomainError);
  Field1D bad = p;
  bad.u[100] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(step(bad, R2, 1e-12), NumericError);
}

TEST_CASE("fluxes vanish at the ends") {
  const auto F = half_node_fluxes(parabola(101, -1.5, 1.5), R2);
  REQUIRE(F.size() == 100);
  CHECK(F.front() == 0.0);
  CHECK(F.back() == 0.0);
  CHECK(max_diffusivity(parabola(101, -1.5, 1.5), R2) > 0.0);
}

TEST_CASE("implicit step") {
  const Field1D p = smooth(101);
  ImplicitStats st;
  const double T = 1e-6;
  const auto q = step_implicit(p, R2, T, {}, &st);
  REQUIRE(q.has_value());
  CHECK(st.newton_iterations >= 1);
  CHECK(st.newton_iterations <= 20);
  CHECK(std::abs(q->mass - p.mass) <= 1e-13 * p.mass);
  // first order in time: agrees with many small explicit steps to O(dt)
  Field1D e = p;
  double t = 0.0;
  while (t < T) {
    const double dt = std::min(suggest_dt(e, R2), T - t);
    e = step(e, R2, dt);
    t += dt;
  }
  double diff = 0.0, change = 0.0;
  for (std::size_t i = 0; i < p.u.size(); ++i) {
    diff = std::max(diff, std::abs(q->u[i] - e.u[i]));
    change = std::max(change, std::abs(e.u[i] - p.u[i]));
  }
  CHECK(change > 0.0);
  CHECK(diff < 0.1 * change);
  CHECK_THROWS_AS(step_implicit(p, R2, -1.0), DomainError);
}

TEST_CASE("front position") {
  const Field1D p = parabola(4001);
  const FrontPosition f = front_position(p);
  REQUIRE(f.detected);
  const double expect = std::sqrt(2.0 * (1.0 - 1e-3));
  CHECK(f.right == doctest::Approx(expect).epsilon(1e-5));
  CHECK(f.left == doctest::Approx(-expect).epsilon(1e-5));
  CHECK(f.half_width() == doctest::Approx(expect).epsilon(1e-5));
  CHECK_FALSE(front_position(smooth(51)).detected);
}

TEST_CASE("front exponent fit") {
  std::vector<FrontRecord> rec;
  for (double t = 1.0; t < 1e4; t *= 1.3) {
    FrontPosition p;
    p.right = 2.0 * std::pow(t, 0.1);
    p.left = -p.right;
    p.detected = true;
    rec.push_back({t, p});
  }
  CHECK(front_exponent_fit(rec, 10.0, 1e4) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_THROWS_AS(front_exponent_fit(rec, 2e4, 3e4), DomainError);
}

TEST_CASE("evolution keeps its ledger") {
  Field1D f = init_drop(DropShape::Rectangle, 1.0, {-0.5, 0.5}, make_grid(-2.0, 2.0, 201));
  f.t = 1.0;
  EvolveOptions eo;
  eo.t_end = 1.5;
  eo.snapshot_times = {1.1, 1.3};
  const auto rep = evolve(f, R2, eo);
  CHECK(rep.field.t >= eo.t_end);
  CHECK(rep.mass_drift() < 1e-12);
  CHECK(rep.field.clipped < 1e-8 * rep.mass0);
  REQUIRE(rep.snapshots.size() == 2);
  CHECK(rep.snapshots[0].t >= 1.1);
  CHECK(rep.snapshots[1].t >= 1.3);
  CHECK(rep.fronts.size() == rep.field.steps + 1);
  for (std::size_t i = 1; i < rep.fronts.size(); ++i) {
    CHECK(rep.fronts[i].front.half_width() >= rep.fronts[i - 1].front.half_width() - 1e-12);
  }
  eo.t_end = 0.5;
  CHECK_THROWS_AS(evolve(f, R2, eo), DomainError);

  EvolveOptions ex;
  ex.scheme = Scheme::Explicit;
  ex.t_end = 1.0 + 1e-6;
  const auto er = evolve(f, R2, ex);
  CHECK(er.mass_drift() < 1e-12);
}

TEST_CASE("similarity snapshot") {
  const PhysicalProfile& prof = zero_angle_profile();
  const Field1D s0 =
      init_drop(DropShape::SelfSimilarSnapshot, std::nullopt, {0.0, 0.0}, make_grid(-2.0, 2.0, 401),
                &prof, 1.0);
  CHECK(s0.t == 1.0);
  const auto rep0 = rescale_compare(s0, R2, prof);
  CHECK(rep0.linf < 1e-14);
  CHECK(rep0.l1 < 1e-14);
  CHECK(rep0.eta_front == doctest::Approx(prof.eta_front).epsilon(1e-15));

  // brief evolution: error from truncation only, shrinking with h
  double prev = 1.0;
  for (std::size_t n : {101u, 201u, 401u}) {
    Field1D f = init_drop(DropShape::SelfSimilarSnapshot, std::nullopt, {0.0, 0.0},
                          make_grid(-2.0, 2.0, n), &prof, 1.0);
    EvolveOptions eo;
    eo.t_end = 1.2;
    eo.dt_rel_max = 1e-3;
    const auto rep = evolve(f, R2, eo);
    const auto cmp = rescale_compare(rep.field, R2, prof);
    CAPTURE(n);
    CHECK(cmp.linf < prev);
    prev = cmp.linf;
  }
  CHECK(prev < 0.02);
  CHECK_THROWS_AS(rescale_compare(s0, make_rheology(3.0), prof), DomainError);
}

TEST_CASE("option parsing") {
  CHECK(parse_mobility("upwind") == Mobility::Upwind);
  CHECK(parse_mobility(to_string(Mobility::Minimum)) == Mobility::Minimum);
  CHECK(parse_scheme("explicit") == Scheme::Explicit);
  CHECK(parse_drop_shape(to_string(DropShape::SelfSimilarSnapshot)) ==
        DropShape::SelfSimilarSnapshot);
  CHECK_THROWS_AS(parse_mobility("harmonic"), DomainError);
  CHECK_THROWS_AS(parse_scheme("rk4"), DomainError);
  CHECK_THROWS_AS(parse_drop_shape("disc"), DomainError);
}

}
