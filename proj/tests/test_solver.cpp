#include "auerbach/solver.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "oracles.hpp"

using namespace auerbach;

namespace {

Body quartic_body(int n) {
  std::map<std::vector<int>, double> coeffs;
  for (int i = 0; i < n; ++i) {
    std::vector<int> exps(n, 0);
    exps[i] = 4;
    coeffs[exps] = 1.0;
  }
  return Body::poly_level(n, 2, coeffs);
}

BasisClass synthetic_class(int n, int index, bool degenerate) {
  BasisClass cls{Frame::identity(n), 0,     0, 0.0,   0.0,
                 Vector(),           index, 0, false, AuerbachReport{}};
  cls.degenerate = degenerate;
  cls.nullity = degenerate ? 1 : 0;
  return cls;
}

}  // namespace

TEST_SUITE_BEGIN("solver");

TEST_CASE("random_frame reproducibility and invariants") {
  NormalSampler rng_a(42);
  NormalSampler rng_b(42);
  const Frame a = random_frame(3, rng_a);
  const Frame b = random_frame(3, rng_b);
  CHECK((a.cols() - b.cols()).cwiseAbs().maxCoeff() == 0.0);

  NormalSampler rng(7);
  for (int k = 0; k < 200; ++k) {
    const Frame f = random_frame(3, rng, 1e-3);
    CHECK(f.det() > 0.0);
    CHECK(std::abs(f.det()) >= 1e-3);
    for (int j = 0; j < 3; ++j) {
      CHECK(std::abs(f.cols().col(j).norm() - 1.0) < 1e-12);
    }
  }

  CHECK_THROWS_AS(random_frame(3, rng, 10.0), NumericError);
}

TEST_CASE("random_frame columns have near-zero empirical mean") {
  NormalSampler rng(8);
  Matrix sum = Matrix::Zero(3, 3);
  const int samples = 10000;
  for (int k = 0; k < samples; ++k) sum += random_frame(3, rng).cols();
  sum /= samples;
  for (int j = 0; j < 3; ++j) {
    CHECK(sum.col(j).norm() < 0.05);
  }
}

TEST_CASE("refine from a critical start converges in zero iterations") {
  SearchConfig config;
  const RefineOutcome outcome =
      refine_to_critical(Body::p_norm(2, 4.0), Frame::identity(2), config);
  const auto* point = std::get_if<CriticalPoint>(&outcome);
  REQUIRE(point != nullptr);
  CHECK(point->iterations == 0);
  CHECK(point->grad_norm < config.crit_tol);
  CHECK((point->frame.cols() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK(point->index == 1);
  CHECK(point->nullity == 0);
}

TEST_CASE("refine returns to the standard frame from a small perturbation") {
  const Body body = quartic_body(2);
  SearchConfig config;
  NormalSampler rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const Frame id = Frame::identity(2);
    const TangentVector noise = testing::random_tangent(id, rng);
    const Frame start =
        retract(id, TangentVector(1e-2 * noise.components()));
    const RefineOutcome outcome = refine_to_critical(body, start, config);
    const auto* point = std::get_if<CriticalPoint>(&outcome);
    REQUIRE(point != nullptr);
    CHECK((canonicalize(point->frame).cols() - Matrix::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() < 1e-8);
  }
}

TEST_CASE("refine on the round ball lands on an orthonormal frame") {
  const Body ball = Body::p_norm(3, 2.0);
  SearchConfig config;
  NormalSampler rng(10);
  for (int trial = 0; trial < 5; ++trial) {
    const Frame start = random_frame(3, rng);
    const RefineOutcome outcome = refine_to_critical(ball, start, config);
    const auto* point = std::get_if<CriticalPoint>(&outcome);
    REQUIRE(point != nullptr);
    const Matrix& v = point->frame.cols();
    CHECK((v.transpose() * v - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <
          1e-6);
    CHECK(point->degenerate);
    CHECK(point->nullity >= 3);
  }
}

TEST_CASE("canonicalize examples and properties") {
  Matrix m(2, 2);
  m << 0.0, -1.0, -1.0, 0.0;  // columns (0,-1) and (-1,0)
  const Frame canon = canonicalize(Frame(m));
  CHECK((canon.cols() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);

  NormalSampler rng(11);
  for (int k = 0; k < 1000; ++k) {
    const Frame f = random_frame(3, rng);
    const Frame once = canonicalize(f);
    const Frame twice = canonicalize(once);
    CHECK((once.cols() - twice.cols()).cwiseAbs().maxCoeff() == 0.0);
  }
  for (int k = 0; k < 100; ++k) {
    const Frame f = random_frame(3, rng);
    const Matrix group_element =
        testing::random_signed_permutation(3, rng, /*orientation=*/false);
    const Frame moved = Frame(f.cols() * group_element);
    CHECK((canonicalize(moved).cols() - canonicalize(f).cols())
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
}

TEST_CASE("basis search on the quartic disk finds exactly the two known classes") {
  const Body body = Body::p_norm(2, 4.0);
  SearchConfig config;
  config.starts = 80;
  config.seed = 1;
  const BasisSearchReport report = find_basis_classes(body, config);
  REQUIRE(report.classes.size() == 2);
  std::set<int> indices;
  for (const BasisClass& cls : report.classes) {
    CHECK_FALSE(cls.degenerate);
    CHECK(cls.verification.passed);
    CHECK(cls.verification.residual < 1e-8);
    CHECK(cls.grad_norm < config.crit_tol);
    indices.insert(cls.index);
  }
  CHECK(indices == std::set<int>{0, 1});
  for (const BasisClass& cls : report.classes) {
    if (cls.index == 1) {
      CHECK(std::abs(cls.f_value) < 1e-12);  // standard basis
    } else {
      CHECK(cls.f_value ==
            doctest::Approx(-0.5 * std::log(2.0)).epsilon(1e-9));  // diagonal
    }
  }
  int members = 0;
  for (const BasisClass& cls : report.classes) members += cls.members_found;
  CHECK(members + report.diverged == config.starts);

  const BasisSearchReport again = find_basis_classes(body, config);
  REQUIRE(again.classes.size() == report.classes.size());
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    CHECK((again.classes[i].canonical.cols() - report.classes[i].canonical.cols())
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK(again.classes[i].members_found == report.classes[i].members_found);
  }
}

TEST_CASE("power bodies always yield the standard-basis class as a middle saddle") {
  for (const int n : {2, 3}) {
    SearchConfig config;
    config.starts = n == 2 ? 40 : 120;
    config.seed = 13;
    const BasisSearchReport report =
        find_basis_classes(quartic_body(n), config);
    bool found_standard = false;
    for (const BasisClass& cls : report.classes) {
      if ((cls.canonical.cols() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <
          1e-8) {
        found_standard = true;
        CHECK_FALSE(cls.degenerate);
        CHECK(cls.index == n * (n - 1) / 2);
        CHECK(cls.nullity == 0);
      }
    }
    CHECK(found_standard);
  }
}

TEST_CASE("basis search on the ball reports only degenerate classes") {
  SearchConfig config;
  config.starts = 40;
  config.seed = 2;
  const BasisSearchReport report =
      find_basis_classes(Body::p_norm(2, 2.0), config);
  CHECK(!report.classes.empty());
  for (const BasisClass& cls : report.classes) {
    CHECK(cls.degenerate);
    CHECK(cls.nullity >= 1);
  }
}

TEST_CASE("quartic ball in R^3 reaches the category bound") {
  SearchConfig config;
  config.starts = 150;
  config.seed = 2;
  const BasisSearchReport report =
      find_basis_classes(Body::p_norm(3, 4.0), config);
  int verified = 0;
  for (const BasisClass& cls : report.classes) {
    if (cls.verification.passed) ++verified;
  }
  CHECK(verified >= 4);  // n(n-1)/2 + 1
}

TEST_CASE("basis search works through the finite-difference radial path") {
  // Smooth symmetric body given only by its radial function; gradients of
  // log h come from sphere-chart differences end to end.
  const Body body = Body::from_radial_fn(
      2,
      [](const Vector& u) {
        const double p4 = std::pow(u[0], 4) + std::pow(u[1], 4);
        return 1.0 / (1.0 + 0.05 * p4);
      },
      /*symmetric=*/true, /*smooth=*/true);
  SearchConfig config;
  config.starts = 40;
  config.seed = 14;
  const BasisSearchReport report = find_basis_classes(body, config);
  REQUIRE(!report.classes.empty());
  for (const BasisClass& cls : report.classes) {
    CHECK(cls.grad_norm < config.crit_tol);
    CHECK(cls.verification.passed);
  }
  // Same symmetry type as the quartic ball: the standard class must appear.
  bool found_standard = false;
  for (const BasisClass& cls : report.classes) {
    if ((cls.canonical.cols() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-6) {
      found_standard = true;
    }
  }
  CHECK(found_standard);
}

TEST_CASE("anisotropic ellipsoids report degenerate continua") {
  // Ellipsoids are linear images of the ball, so their critical frames come
  // in families; every class must be flagged degenerate.
  Matrix q(2, 2);
  q << 2.0, 0.3, 0.3, 0.9;
  SearchConfig config;
  config.starts = 30;
  config.seed = 15;
  const BasisSearchReport report = find_basis_classes(Body::ellipsoid(q), config);
  REQUIRE(!report.classes.empty());
  for (const BasisClass& cls : report.classes) {
    CHECK(cls.degenerate);
    CHECK(cls.nullity >= 1);
    CHECK(cls.verification.passed);
  }
}

TEST_CASE("four-dimensional quartic ball clears its category bound") {
  SearchConfig config;
  config.starts = 300;
  config.seed = 16;
  const BasisSearchReport report =
      find_basis_classes(Body::p_norm(4, 4.0), config);
  int verified = 0;
  for (const BasisClass& cls : report.classes) {
    if (cls.verification.passed && !cls.degenerate) ++verified;
  }
  CHECK(verified >= 7);  // n(n-1)/2 + 1 for n = 4

  // In R^4 this body is not Morse: there is a one-parameter family of
  // critical frames at f = -log 3 (walking the null eigendirection and
  // re-refining reproduces f while drifting through distinct canonical
  // forms). The pipeline must flag that family degenerate and mark Morse
  // counting inconclusive rather than inflating the class count.
  bool saw_family = false;
  for (const BasisClass& cls : report.classes) {
    if (std::abs(cls.f_value + std::log(3.0)) < 1e-9) {
      saw_family = true;
      CHECK(cls.degenerate);
    }
  }
  CHECK(saw_family);
  CHECK_FALSE(morse_inequality_check(report.classes, 4).conclusive);
}

TEST_CASE("f and Morse data are invariant under the symmetry group") {
  const Body body = quartic_body(2);
  SearchConfig config;
  config.starts = 30;
  config.seed = 3;
  const BasisSearchReport report = find_basis_classes(body, config);
  NormalSampler rng(12);
  const BasisVolumeObjective objective(body);
  for (const BasisClass& cls : report.classes) {
    for (int k = 0; k < 5; ++k) {
      const Matrix g =
          testing::random_signed_permutation(2, rng, /*orientation=*/true);
      const Frame moved = Frame(cls.canonical.cols() * g);
      if (!(moved.det() > 0.0)) continue;
      CHECK(objective_f(body, moved) ==
            doctest::Approx(cls.f_value).epsilon(1e-13));
      const MorseData morse = classify_morse(objective, moved.cols());
      CHECK(morse.index == cls.index);
      CHECK(morse.nullity == cls.nullity);
    }
  }
}

TEST_CASE("morse inequality check") {
  std::vector<BasisClass> classes;
  for (const int idx : {0, 1, 1, 2, 2, 3}) {
    classes.push_back(synthetic_class(3, idx, false));
  }
  const MorseCheckReport pass = morse_inequality_check(classes, 3);
  CHECK(pass.conclusive);
  CHECK(pass.passed);
  CHECK(pass.index_histogram.at(1) == 2);

  classes.pop_back();  // five classes: deficit of one
  const MorseCheckReport fail = morse_inequality_check(classes, 3);
  CHECK(fail.conclusive);
  CHECK_FALSE(fail.passed);
  CHECK(fail.constraints[0].observed == 5);
  CHECK(fail.constraints[0].required == 6);

  std::vector<BasisClass> two = {synthetic_class(2, 0, false),
                                 synthetic_class(2, 1, false)};
  const MorseCheckReport n2 = morse_inequality_check(two, 2);
  CHECK(n2.passed);
  CHECK(n2.constraints.size() == 1);  // index constraints only apply for n >= 3

  two.push_back(synthetic_class(2, 0, true));
  const MorseCheckReport inconclusive = morse_inequality_check(two, 2);
  CHECK_FALSE(inconclusive.conclusive);
  CHECK_FALSE(inconclusive.passed);
}

TEST_CASE("config validation") {
  SearchConfig config;
  config.starts = 0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.starts = 1;
  config.crit_tol = 0.0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.crit_tol = 1e-9;
  config.max_iters = 0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);

  const Body rough = Body::from_radial_fn(
      2, [](const Vector& u) { return 1.0 + 0.1 * u[0] * u[0]; }, true,
      /*smooth=*/false);
  SearchConfig ok;
  CHECK_THROWS_AS(find_basis_classes(rough, ok), std::invalid_argument);
}

TEST_SUITE_END();
