#include <catch2/catch_amalgamated.hpp>

#include "phasekit/generators.hpp"
#include "phasekit/sectorial.hpp"

using namespace phasekit;

namespace {

ComplexMatrix rotation2() {
  ComplexMatrix c(2, 2);
  c << 0.0, -1.0, 1.0, 0.0;
  return c;
}

ComplexMatrix diag_c(std::initializer_list<Complex> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()),
                                        static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (Complex v : d) m(i, i) = v, ++i;
  return m;
}

double wrap_diff(double a, double b) { return wrap_angle(a - b); }

}  // namespace

TEST_CASE("hermitian split") {
  const ComplexMatrix c = rotation2();
  auto [a, b] = hermitian_split(c);
  CHECK(a.norm() == 0.0);
  ComplexMatrix expect(2, 2);
  expect << Complex(0, 0), Complex(0, 1), Complex(0, -1), Complex(0, 0);
  CHECK((b - expect).norm() < 1e-15);
  CHECK((c - (a + Complex(0, 1) * b)).norm() < 1e-15);

  Rng rng(3);
  const ComplexMatrix h = gen::hermitian(3, rng);
  auto [ah, bh] = hermitian_split(h);
  CHECK((ah - h).norm() < 1e-14);
  CHECK(bh.norm() < 1e-14);
  auto [aj, bj] = hermitian_split(Complex(0, 1) * h);
  CHECK(aj.norm() < 1e-14);
  CHECK((bj - h).norm() < 1e-14);
}

TEST_CASE("accretivity arcs of reference matrices") {
  const AngleArc id = accretivity_arc(ComplexMatrix::Identity(2, 2));
  REQUIRE(id.kind == AngleArc::Kind::Arc);
  CHECK(id.lo == Catch::Approx(-kPi / 2).margin(1e-9));
  CHECK(id.hi == Catch::Approx(kPi / 2).margin(1e-9));

  CHECK(accretivity_arc(ComplexMatrix::Zero(2, 2)).is_full());

  const AngleArc rot = accretivity_arc(rotation2());
  REQUIRE(rot.kind == AngleArc::Kind::Arc);
  CHECK(rot.length() == Catch::Approx(0.0).margin(1e-9));
  CHECK(rot.midpoint() == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("touch-point arc without rotated-Hermitian structure") {
  // H(C) = diag(1, 0) at alpha = 0 and indefinite elsewhere.
  ComplexMatrix c(2, 2);
  c << 1.0, 1.0, -1.0, 0.0;
  const AngleArc arc = accretivity_arc(c);
  REQUIRE(arc.kind == AngleArc::Kind::Arc);
  // The margin is quadratic at a touch point, so the PSD threshold widens
  // the located arc to about 2 sqrt(eps_psd); the midpoint stays sharp.
  CHECK(arc.length() <= 1e-4);
  CHECK(std::abs(arc.midpoint()) < 1e-6);
}

TEST_CASE("classification of the reference matrices") {
  const SectorClass a = classify(diag_c({0.0, 1.0}));
  CHECK(a.kind == SectorKind::QuasiSectorial);
  CHECK(a.rank == 1);

  const SectorClass b = classify(rotation2());
  CHECK(b.kind == SectorKind::SemiSectorial);
  CHECK(b.rotated_hermitian);
  CHECK(b.rank == 2);

  ComplexMatrix corner(2, 2);
  corner << 1.0, 1.0, -1.0, 0.0;
  const SectorClass c = classify(corner);
  CHECK(c.kind == SectorKind::SemiSectorial);
  CHECK_FALSE(c.rotated_hermitian);

  CHECK(classify(ComplexMatrix::Identity(3, 3)).kind ==
        SectorKind::Sectorial);

  const SectorClass z = classify(ComplexMatrix::Zero(2, 2));
  CHECK(z.kind == SectorKind::QuasiSectorial);
  CHECK(z.rank == 0);
  CHECK(z.feasible_arc.is_full());

  ComplexMatrix nil(2, 2);
  nil << 0.0, 2.0, 0.0, 0.0;
  CHECK(classify(nil).kind == SectorKind::NotSemiSectorial);
}

TEST_CASE("field angle") {
  CHECK(field_angle(diag_c({1.0, std::polar(1.0, kPi / 3)})) ==
        Catch::Approx(kPi / 3).margin(1e-8));
  ComplexMatrix nil(2, 2);
  nil << 0.0, 2.0, 0.0, 0.0;
  CHECK(field_angle(nil) == Catch::Approx(2 * kPi));
  CHECK(field_angle(rotation2()) == Catch::Approx(kPi).margin(1e-8));
  CHECK_THROWS_AS(field_angle(ComplexMatrix::Zero(2, 2)), DomainError);
}

TEST_CASE("quasi-sectorial phases: fixed cases") {
  const PhaseList a = phases_quasi(diag_c({0.0, 1.0}));
  REQUIRE(a.rank == 1);
  CHECK(a.phases[0] == Catch::Approx(0.0).margin(1e-10));

  const PhaseList b =
      phases_quasi(std::polar(1.0, kPi / 4) * ComplexMatrix::Identity(2, 2));
  REQUIRE(b.rank == 2);
  CHECK(b.phases[0] == Catch::Approx(kPi / 4).margin(1e-10));
  CHECK(b.phases[1] == Catch::Approx(kPi / 4).margin(1e-10));
  CHECK(b.center == Catch::Approx(kPi / 4).margin(1e-10));

  CHECK(phases_quasi(ComplexMatrix::Zero(2, 2)).empty());
}

TEST_CASE("quasi-sectorial phases recover a planted decomposition") {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix tmat = gen::nonsingular(2, rng);
    const ComplexMatrix c =
        tmat.adjoint() *
        diag_c({std::polar(1.0, kPi / 5), std::polar(1.0, -kPi / 7)}) * tmat;
    const PhaseList p = phases_quasi(c);
    REQUIRE(p.rank == 2);
    CHECK(p.phases[0] == Catch::Approx(kPi / 5).margin(1e-9));
    CHECK(p.phases[1] == Catch::Approx(-kPi / 7).margin(1e-9));
  }
}

TEST_CASE("rotated-Hermitian phases") {
  const PhaseList a =
      phases_rotated_hermitian(Complex(0, 1) * diag_c({1.0, -1.0}));
  REQUIRE(a.rank == 2);
  CHECK(a.phases[0] == Catch::Approx(kPi / 2).margin(1e-12));
  CHECK(a.phases[1] == Catch::Approx(-kPi / 2).margin(1e-12));
  CHECK(a.center == Catch::Approx(0.0).margin(1e-12));

  const PhaseList b = phases_rotated_hermitian(rotation2());
  REQUIRE(b.rank == 2);
  CHECK(b.phases[0] == Catch::Approx(kPi / 2).margin(1e-12));
  CHECK(b.phases[1] == Catch::Approx(-kPi / 2).margin(1e-12));

  const PhaseList c =
      phases_rotated_hermitian(Complex(0, 1) * diag_c({1.0, 1.0, 0.0}));
  REQUIRE(c.rank == 2);
  CHECK(c.phases[0] == Catch::Approx(kPi / 2).margin(1e-12));
  CHECK(c.phases[1] == Catch::Approx(kPi / 2).margin(1e-12));

  CHECK_THROWS_AS(phases_rotated_hermitian(diag_c({1.0, std::polar(1.0, 0.3)})),
                  DomainError);
}

TEST_CASE("best-effort phases of a defective semi-sectorial matrix") {
  ComplexMatrix e(2, 2);
  e << 1.0, 2.0, 0.0, 1.0;
  const PhaseList p = phases_semi_best_effort(e);
  REQUIRE(p.rank == 2);
  CHECK(p.approximate);
  CHECK(p.phases[0] == Catch::Approx(kPi / 2).margin(1e-3));
  CHECK(p.phases[1] == Catch::Approx(-kPi / 2).margin(1e-3));
}

TEST_CASE("best-effort phases of a normal boundary matrix") {
  const PhaseList p =
      phases_semi_best_effort(diag_c({Complex(0, 1), Complex(0, -1), 1.0}));
  REQUIRE(p.rank == 3);
  CHECK(p.phases[0] == Catch::Approx(kPi / 2).margin(1e-3));
  CHECK(p.phases[1] == Catch::Approx(0.0).margin(1e-3));
  CHECK(p.phases[2] == Catch::Approx(-kPi / 2).margin(1e-3));
}

TEST_CASE("best-effort phases recover a planted mixed decomposition") {
  Rng rng(13);
  const double theta0 = 0.1;
  ComplexMatrix mid = ComplexMatrix::Zero(4, 4);
  mid(0, 0) = std::polar(1.0, theta0 + 0.5);
  mid(1, 1) = std::polar(1.0, theta0 - 0.2);
  mid.block(2, 2, 2, 2) << 1.0, 2.0, 0.0, 1.0;
  mid.block(2, 2, 2, 2) *= std::polar(1.0, theta0);
  const ComplexMatrix tmat =
      gen::nonsingular(4, rng, 4.0);
  const ComplexMatrix c = tmat.adjoint() * mid * tmat;
  const PhaseList p = phases_semi_best_effort(c);
  REQUIRE(p.rank == 4);
  const std::vector<double> expect = {theta0 + kPi / 2, theta0 + 0.5,
                                      theta0 - 0.2, theta0 - kPi / 2};
  for (int i = 0; i < 4; ++i) {
    CHECK(p.phases[static_cast<size_t>(i)] ==
          Catch::Approx(expect[static_cast<size_t>(i)]).margin(1e-3));
  }
}

TEST_CASE("congruence-square route on fixed cases") {
  const PhaseList a = phases_via_congruence_square(ComplexMatrix::Identity(3, 3));
  for (double v : a.phases) CHECK(v == Catch::Approx(0.0).margin(1e-10));

  const PhaseList b = phases_via_congruence_square(
      diag_c({std::polar(1.0, kPi / 3), std::polar(1.0, -kPi / 3)}));
  CHECK(b.phases[0] == Catch::Approx(kPi / 3).margin(1e-10));
  CHECK(b.phases[1] == Catch::Approx(-kPi / 3).margin(1e-10));
}

TEST_CASE("phase routes agree on random sectorial matrices") {
  Rng rng(31);
  for (int t = 0; t < 40; ++t) {
    const int n = gen::uniform_int(rng, 2, 6);
    const double c = gen::uniform(rng, -0.5, 0.5);
    const double w = gen::uniform(rng, 0.2, 1.5);
    const ComplexMatrix m = gen::sectorial(n, rng, c - w, c + w);
    const PhaseList p1 = phases_quasi(m);
    PhaseList p2 = phases_via_congruence_square(m);
    p2.align_center_to(p1.center);
    REQUIRE(p1.rank == p2.rank);
    for (int i = 0; i < p1.rank; ++i) {
      CHECK(p1.phases[static_cast<size_t>(i)] ==
            Catch::Approx(p2.phases[static_cast<size_t>(i)]).margin(1e-6));
    }
  }
}

TEST_CASE("congruence invariance of phases") {
  Rng rng(37);
  for (int t = 0; t < 25; ++t) {
    const int n = gen::uniform_int(rng, 2, 5);
    const ComplexMatrix m = gen::sectorial(n, rng, -0.8, 0.6);
    const ComplexMatrix tmat = gen::nonsingular(n, rng);
    const PhaseList p1 = phases_quasi(m);
    PhaseList p2 = phases_quasi(tmat.adjoint() * m * tmat);
    p2.align_center_to(p1.center);
    for (int i = 0; i < p1.rank; ++i) {
      CHECK(p1.phases[static_cast<size_t>(i)] ==
            Catch::Approx(p2.phases[static_cast<size_t>(i)]).margin(1e-6));
    }
  }
}

TEST_CASE("rotation equivariance of phases") {
  Rng rng(41);
  for (int t = 0; t < 25; ++t) {
    const int n = gen::uniform_int(rng, 2, 5);
    const ComplexMatrix m = gen::sectorial(n, rng, -0.4, 0.4);
    const double spread = phases_quasi(m).spread();
    const double theta =
        gen::uniform(rng, -0.9, 0.9) * (kPi - spread) / 2.0;
    const PhaseList p0 = phases_quasi(m);
    const PhaseList p1 = phases_quasi(std::polar(1.0, theta) * m);
    for (int i = 0; i < p0.rank; ++i) {
      CHECK(wrap_diff(p1.phases[static_cast<size_t>(i)],
                      p0.phases[static_cast<size_t>(i)] + theta) ==
            Catch::Approx(0.0).margin(1e-8));
    }
  }
}

TEST_CASE("extreme phases line up with the arc endpoints") {
  Rng rng(43);
  for (int t = 0; t < 25; ++t) {
    const int n = gen::uniform_int(rng, 2, 5);
    const int r = gen::uniform_int(rng, 1, n);
    const ComplexMatrix m = gen::quasi_sectorial(n, r, rng, -0.7, 0.5);
    const SectorClass cls = classify(m);
    const PhaseList p = phases_quasi(m);
    CHECK(wrap_diff(p.phi_max(), cls.feasible_arc.lo + kPi / 2) ==
          Catch::Approx(0.0).margin(1e-7));
    CHECK(wrap_diff(p.phi_min(), cls.feasible_arc.hi - kPi / 2) ==
          Catch::Approx(0.0).margin(1e-7));
  }
}

TEST_CASE("accretivity corresponds to phases in the closed right sector") {
  Rng rng(47);
  for (int t = 0; t < 25; ++t) {
    const int n = gen::uniform_int(rng, 2, 5);
    // Accretive draw: phases inside [-pi/2, pi/2].
    const ComplexMatrix acc = gen::sectorial(n, rng, -kPi / 2 + 0.05,
                                             kPi / 2 - 0.05);
    CHECK(is_psd(hermitian_part(acc)));
    const PhaseList p = phases_quasi(acc);
    CHECK(p.phi_max() <= kPi / 2 + 1e-9);
    CHECK(p.phi_min() >= -kPi / 2 - 1e-9);
    // Phase-bounded draw centered elsewhere loses accretivity once the
    // sector leaves the right half plane entirely.
    const ComplexMatrix off = gen::sectorial(n, rng, kPi / 2 + 0.1,
                                             kPi / 2 + 0.6);
    CHECK_FALSE(is_psd(hermitian_part(off)));
  }
}

TEST_CASE("field angle below pi marks the quasi-sectorial classes") {
  Rng rng(53);
  for (int t = 0; t < 20; ++t) {
    const int n = gen::uniform_int(rng, 2, 5);
    const int kind = gen::uniform_int(rng, 0, 2);
    ComplexMatrix m;
    if (kind == 0) {
      m = gen::sectorial(n, rng, -0.6, 0.6);
    } else if (kind == 1) {
      m = gen::quasi_sectorial(n, gen::uniform_int(rng, 1, n), rng, -0.6, 0.6);
    } else {
      m = gen::rotated_hermitian(n, rng, 0.1);
    }
    const SectorClass cls = classify(m);
    const double delta = field_angle(m);
    const bool quasi_or_better = cls.kind == SectorKind::Sectorial ||
                                 cls.kind == SectorKind::QuasiSectorial;
    CHECK(quasi_or_better == (delta < kPi - 1e-9));
  }
}

TEST_CASE("eigenvalue angles stay inside the phase interval") {
  Rng rng(59);
  for (int t = 0; t < 25; ++t) {
    const int n = gen::uniform_int(rng, 2, 5);
    const ComplexMatrix m = gen::sectorial(n, rng, -0.9, 0.7);
    const PhaseList p = phases_quasi(m);
    const ComplexVector lam = eigenvalues(m);
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      const double a = std::arg(lam(i));
      CHECK(a <= p.phi_max() + 1e-8);
      CHECK(a >= p.phi_min() - 1e-8);
    }
  }
}

TEST_CASE("numerical range boundary") {
  const NRBoundary id = nr_boundary(ComplexMatrix::Identity(2, 2), 16);
  for (const auto& s : id.samples) {
    CHECK(std::abs(s.point - Complex(1.0, 0.0)) < 1e-12);
  }

  ComplexMatrix nil(2, 2);
  nil << 0.0, 2.0, 0.0, 0.0;
  const NRBoundary disk = nr_boundary(nil, 32);
  for (const auto& s : disk.samples) {
    CHECK(s.support == Catch::Approx(1.0).margin(1e-12));
    CHECK(std::abs(s.point) == Catch::Approx(1.0).margin(1e-9));
  }

  // Every sampled point lies inside every sampled half-plane.
  Rng rng(61);
  const ComplexMatrix m = gen::gaussian(4, 4, rng);
  const NRBoundary nr = nr_boundary(m, 64);
  for (const auto& s : nr.samples) {
    for (const auto& h : nr.samples) {
      const double proj = (std::polar(1.0, -h.theta) * s.point).real();
      CHECK(proj <= h.support + 1e-9 * std::max(1.0, m.norm()));
    }
  }

  CHECK_THROWS_AS(nr_boundary(nil, 4), std::invalid_argument);
}

TEST_CASE("normal-matrix boundary stays in the eigenvalue hull") {
  const ComplexMatrix m = diag_c({1.0, Complex(0, 1)});
  const NRBoundary nr = nr_boundary(m, 64);
  // Hull of {1, j}: the segment; check membership via its support function
  // h(theta) = max(cos theta, sin theta).
  for (const auto& s : nr.samples) {
    const double lhs = s.support;
    const double rhs = std::max(std::cos(s.theta), std::sin(s.theta));
    CHECK(lhs == Catch::Approx(rhs).margin(1e-10));
  }
}
