#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "entlab/error.hpp"
#include "entlab/quantum.hpp"
#include "support.hpp"

using namespace entlab;
using doctest::Approx;

namespace {

Vector amps(std::initializer_list<cplx> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (cplx x : xs) v(i++) = x;
  return v;
}

Matrix diag(std::initializer_list<double> xs) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) {
    m(i, i) = x;
    ++i;
  }
  return m;
}

const double r2 = 1.0 / std::sqrt(2.0);

// |<psi|(u (x) v) phi>|^2 through the coefficient matrices.
double local_overlap(const PureBipartiteState& psi, const PureBipartiteState& phi, const Matrix& u,
                     const Matrix& v) {
  return overlap_squared(psi.amplitudes(), apply_local(u, v, phi.amplitudes(), phi.dim_A(), phi.dim_B()));
}

// Alternating polar ascent on |tr(u C_phi v^T C_psi^*)| from a random start.
double alternating_lu(const PureBipartiteState& psi, const PureBipartiteState& phi, std::mt19937_64& rng) {
  const Matrix cp = psi.coefficients(), cf = phi.coefficients();
  Matrix u = haar_unitary(psi.dim_A(), rng), v = haar_unitary(psi.dim_B(), rng);
  for (int it = 0; it < 200; ++it) {
    {
      const Matrix n = cf * v.transpose() * cp.adjoint();
      Eigen::JacobiSVD<Matrix> svd(n, Eigen::ComputeFullU | Eigen::ComputeFullV);
      u = svd.matrixV() * svd.matrixU().adjoint();
    }
    {
      const Matrix n = cp.adjoint() * u * cf;
      Eigen::JacobiSVD<Matrix> svd(n, Eigen::ComputeFullU | Eigen::ComputeFullV);
      v = (svd.matrixV() * svd.matrixU().adjoint()).transpose();
    }
  }
  return local_overlap(psi, phi, u, v);
}

}  // namespace

TEST_CASE("density matrix validation") {
  CHECK_NOTHROW(DensityMatrix(diag({0.5, 0.5})));
  CHECK_THROWS_AS(DensityMatrix(diag({0.6, 0.6})), Error);
  CHECK_THROWS_AS(DensityMatrix(diag({1.2, -0.2})), Error);
  Matrix nh = diag({0.5, 0.5});
  nh(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix{nh}, Error);
  // Slightly negative eigenvalue is clipped and renormalized.
  const DensityMatrix clipped(diag({1.0 + 5e-11, -5e-11}));
  CHECK(clipped.matrix()(1, 1).real() == 0.0);
  CHECK(std::abs(clipped.matrix().trace().real() - 1.0) < 1e-15);
}

TEST_CASE("schmidt examples") {
  const PureBipartiteState bell(2, 2, amps({r2, 0, 0, r2}));
  const SchmidtDecomposition sb = schmidt(bell);
  REQUIRE(sb.rank() == 2);
  CHECK(sb.coefficients[0] == Approx(r2));
  CHECK(sb.coefficients[1] == Approx(r2));

  const PureBipartiteState p01(2, 2, amps({0, 1, 0, 0}));
  CHECK(schmidt(p01).rank() == 1);
  CHECK(schmidt(p01).coefficients[0] == Approx(1.0));

  const PureBipartiteState s73(2, 2, amps({std::sqrt(0.7), 0, 0, std::sqrt(0.3)}));
  CHECK(schmidt(s73).coefficients[0] == Approx(std::sqrt(0.7)));
  CHECK(schmidt(s73).coefficients[1] == Approx(std::sqrt(0.3)));
  CHECK_THROWS_AS(PureBipartiteState(2, 2, Vector::Zero(4)), Error);
  CHECK_THROWS_AS(PureBipartiteState::normalized(2, 2, Vector::Zero(4)), Error);
}

TEST_CASE("schmidt invariants on random states") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const int dA = 1 + static_cast<int>(rng() % 6), dB = 1 + static_cast<int>(rng() % 9);
    const PureBipartiteState psi = random_state(dA, dB, rng);
    const SchmidtDecomposition s = schmidt(psi);
    double norm = 0.0;
    for (double c : s.coefficients) norm += c * c;
    CHECK(std::abs(norm - 1.0) < 1e-10);
    const auto r = static_cast<Eigen::Index>(s.rank());
    CHECK((s.basis_A.adjoint() * s.basis_A - Matrix::Identity(r, r)).norm() < 1e-10);
    CHECK((s.basis_B.adjoint() * s.basis_B - Matrix::Identity(r, r)).norm() < 1e-10);
    CHECK((s.reconstruct() - psi.amplitudes()).norm() < 1e-9);
    // Both marginals carry the Schmidt spectrum.
    const Spectrum sa = spectrum(marginal(psi, Party::A));
    const Spectrum sb = spectrum(marginal(psi, Party::B));
    const std::size_t n = std::max(sa.size(), sb.size());
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(sa.at_padded(i) - sb.at_padded(i)) < 1e-10);
    for (std::size_t i = 0; i < s.rank(); ++i) CHECK(std::abs(s.spectrum[i] - sa.at_padded(i)) < 1e-10);
  }
}

TEST_CASE("marginal examples") {
  const PureBipartiteState bell = PureBipartiteState::maximally_entangled(2);
  CHECK((marginal(bell, Party::A).matrix() - diag({0.5, 0.5})).norm() < 1e-15);
  const PureBipartiteState p01(2, 2, amps({0, 1, 0, 0}));
  CHECK((marginal(p01, Party::A).matrix() - diag({1.0, 0.0})).norm() < 1e-15);
  CHECK((marginal(p01, Party::B).matrix() - diag({0.0, 1.0})).norm() < 1e-15);
  const PureBipartiteState s73(2, 2, amps({std::sqrt(0.7), 0, 0, std::sqrt(0.3)}));
  CHECK((marginal(s73, Party::B).matrix() - diag({0.7, 0.3})).norm() < 1e-15);
}

TEST_CASE("trace distance and fidelity examples") {
  const DensityMatrix z0(diag({1, 0})), z1(diag({0, 1})), half(diag({0.5, 0.5})), s73(diag({0.7, 0.3}));
  CHECK(trace_distance(s73, s73) == Approx(0.0));
  CHECK(trace_distance(z0, z1) == Approx(2.0));
  CHECK(trace_distance(s73, half) == Approx(0.4));
  CHECK(fidelity(s73, s73) == Approx(1.0));
  CHECK(fidelity(z0, half) == Approx(0.5));
  CHECK_THROWS_AS(trace_distance(z0, DensityMatrix(diag({1, 0, 0}))), Error);
  CHECK_THROWS_AS(fidelity(z0, DensityMatrix(diag({1, 0, 0}))), Error);

  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 5);
    const Vector a = random_state(d, 1, rng).amplitudes(), b = random_state(d, 1, rng).amplitudes();
    CHECK(fidelity(DensityMatrix::pure(a), DensityMatrix::pure(b)) == Approx(overlap_squared(a, b)).epsilon(1e-9));
  }
}

TEST_CASE("Fuchs-van de Graaf inequalities") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 6);
    const DensityMatrix r = random_density(d, rng), s = random_density(d, rng);
    const double f = fidelity(r, s), half = 0.5 * trace_distance(r, s);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0 + 1e-12);
    CHECK(1.0 - std::sqrt(f) <= half + 1e-12);
    CHECK(half <= std::sqrt(std::max(0.0, 1.0 - f)) + 1e-12);
  }
}

TEST_CASE("Uhlmann optimizer attains the fidelity") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 4);
    const DensityMatrix r = random_density(d, rng), s = random_density(d, rng);
    const double f = fidelity(r, s);
    const PureBipartiteState pr = purify(r), ps = purify(s);
    const Matrix id = Matrix::Identity(d, d);
    for (int k = 0; k < 2000; ++k) {
      CHECK(local_overlap(pr, ps, id, haar_unitary(d, rng)) <= f + 1e-9);
    }
    CHECK(std::abs(local_overlap(pr, ps, id, uhlmann_unitary(r, s)) - f) < 1e-8);
  }
}

TEST_CASE("LU orbit fidelity") {
  const PureBipartiteState bell = PureBipartiteState::maximally_entangled(2);
  const PureBipartiteState p00 = PureBipartiteState::product(2, 2);
  const double s7 = std::sqrt(0.7), s3 = std::sqrt(0.3);
  const PureBipartiteState s73 = PureBipartiteState::from_schmidt(std::vector<double>{s7, s3});
  CHECK(lu_orbit_fidelity(bell, bell) == Approx(1.0));
  CHECK(lu_orbit_fidelity(bell, p00) == Approx(0.5));
  CHECK(lu_orbit_fidelity(s73, bell) ==
        Approx(std::pow(std::sqrt(0.35) + std::sqrt(0.15), 2)).epsilon(1e-14));
  CHECK(lu_orbit_fidelity(s73, bell) == Approx(0.95826).epsilon(1e-5));

  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 30; ++trial) {
    const int dA = 1 + static_cast<int>(rng() % 3), dB = 1 + static_cast<int>(rng() % 3);
    const PureBipartiteState psi = random_state(dA, dB, rng), phi = random_state(dA, dB, rng);
    const double closed = lu_orbit_fidelity(psi, phi);
    const auto [uA, uB] = lu_aligning_unitaries(psi, phi);
    CHECK(std::abs(local_overlap(psi, phi, uA, uB) - closed) < 1e-10);
    double best_alt = 0.0;
    for (int k = 0; k < 4; ++k) best_alt = std::max(best_alt, alternating_lu(psi, phi, rng));
    CHECK(std::abs(best_alt - closed) < 1e-9);
    const int samples = trial < 3 ? 100000 : 3000;
    for (int k = 0; k < samples; ++k) {
      const double v = local_overlap(psi, phi, haar_unitary(dA, rng), haar_unitary(dB, rng));
      if (v > closed + 1e-9) {
        CHECK(v <= closed + 1e-9);
        break;
      }
    }
  }
}

TEST_CASE("LU equivalence iff equal marginal spectra") {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 3);
    const std::vector<double> p = oracle::random_probabilities(d, rng);
    const PureBipartiteState a = oracle::state_with_spectrum(p, d, d, rng);
    const PureBipartiteState b = oracle::state_with_spectrum(p, d, d, rng);
    CHECK(lu_orbit_fidelity(a, b) == Approx(1.0).epsilon(1e-9));
    const PureBipartiteState c = oracle::state_with_spectrum(oracle::random_probabilities(d, rng), d, d, rng);
    const bool same = orbit_distance(schmidt_spectrum(a), schmidt_spectrum(c)) < 1e-9;
    CHECK((std::abs(lu_orbit_fidelity(a, c) - 1.0) < 1e-9) == same);
  }
}

TEST_CASE("local distinguishability is symmetric in the parties") {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 200; ++trial) {
    const int dA = 1 + static_cast<int>(rng() % 4), dB = 1 + static_cast<int>(rng() % 4);
    const PureBipartiteState a = random_state(dA, dB, rng), b = random_state(dA, dB, rng);
    const double side_A = orbit_distance(spectrum(marginal(a, Party::A)), spectrum(marginal(b, Party::A)));
    const double side_B = orbit_distance(spectrum(marginal(a, Party::B)), spectrum(marginal(b, Party::B)));
    CHECK(std::abs(side_A - side_B) < 1e-10);
  }
}

TEST_CASE("align unitary achieves the orbit distance") {
  const DensityMatrix a(diag({0.3, 0.7})), b(diag({0.7, 0.3}));
  const Matrix u = align_unitary(a, b);
  CHECK(trace_norm(a.matrix() - u * b.matrix() * u.adjoint()) < 1e-14);
  CHECK(std::abs(u(0, 0)) < 1e-14);
  CHECK(std::abs(std::abs(u(0, 1)) - 1.0) < 1e-14);

  const DensityMatrix s(diag({0.6, 0.3, 0.1}));
  const Matrix id = align_unitary(s, s);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(std::abs(id(i, i)) - 1.0) < 1e-14);

  std::mt19937_64 rng(28);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 3 + static_cast<int>(rng() % 2);
    const DensityMatrix r = random_density(d, rng), q = random_density(d, rng);
    const double formula = orbit_distance(spectrum(r), spectrum(q));
    const Matrix w = align_unitary(r, q);
    CHECK(std::abs(oracle::hermitian_trace_norm(r.matrix() - w * q.matrix() * w.adjoint()) - formula) < 1e-10);
    for (int k = 0; k < 1000; ++k) {
      const Matrix v = haar_unitary(d, rng);
      const double dist = oracle::hermitian_trace_norm(r.matrix() - v * q.matrix() * v.adjoint());
      if (dist < formula - 1e-9) {
        CHECK(dist >= formula - 1e-9);
        break;
      }
    }
  }
}

TEST_CASE("connect purifications") {
  const PureBipartiteState bell(2, 2, amps({r2, 0, 0, r2}));
  const PureBipartiteState flip(2, 2, amps({0, r2, r2, 0}));
  const PureBipartiteState minus(2, 2, amps({r2, 0, 0, -r2}));

  const Matrix x = connect_purifications(bell, flip).op_B;
  Matrix expect_x(2, 2);
  expect_x << 0, 1, 1, 0;
  CHECK((x - expect_x).norm() < 1e-12);

  CHECK((connect_purifications(bell, bell).op_B - Matrix::Identity(2, 2)).norm() < 1e-12);
  CHECK((connect_purifications(bell, minus).op_B - diag({1, -1})).norm() < 1e-12);

  // Rank-deficient: identity on the support only.
  const PureBipartiteState p00 = PureBipartiteState::product(2, 3);
  CHECK((connect_purifications(p00, p00).op_B - diag({1, 0, 0})).norm() < 1e-12);

  CHECK_THROWS_AS(connect_purifications(bell, PureBipartiteState::product(2, 2)), Error);
  try {
    connect_purifications(bell, PureBipartiteState::product(2, 2));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::no_connector);
  }

  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 300; ++trial) {
    const int dA = 1 + static_cast<int>(rng() % 4), dB1 = 1 + static_cast<int>(rng() % 4);
    const int dB2 = 1 + static_cast<int>(rng() % 4);
    const int r = std::min({dA, dB1, dB2});
    const std::vector<double> p = oracle::random_probabilities(r, rng);
    // Same A-frame, independent B-frames.
    const Matrix u = haar_unitary(dA, rng), v1 = haar_unitary(dB1, rng), v2 = haar_unitary(dB2, rng);
    Matrix c1 = Matrix::Zero(dA, dB1), c2 = Matrix::Zero(dA, dB2);
    for (int i = 0; i < r; ++i) {
      c1 += std::sqrt(p[static_cast<std::size_t>(i)]) * u.col(i) * v1.col(i).transpose();
      c2 += std::sqrt(p[static_cast<std::size_t>(i)]) * u.col(i) * v2.col(i).transpose();
    }
    const PureBipartiteState phi1(dA, dB1, from_coefficients(c1), 1e-9);
    const PureBipartiteState phi2(dA, dB2, from_coefficients(c2), 1e-9);
    const Matrix vb = connect_purifications(phi1, phi2).op_B;
    const Vector moved = apply_local(Matrix::Identity(dA, dA), vb, phi2.amplitudes(), dA, dB2);
    CHECK((moved - phi1.amplitudes()).norm() < 1e-8);
    const PureBipartiteState m(dA, dB1, moved, 1e-8);
    CHECK(trace_distance(marginal(m, Party::A), marginal(phi2, Party::A)) < 1e-9);
  }
}

TEST_CASE("coupling constant") {
  CHECK(coupling_constant(2, 2) == 1.0);
  CHECK(coupling_constant(4, 2) == 2.0);
  CHECK(coupling_constant(2, 4) == 0.5);
  CHECK_THROWS_AS(coupling_constant(0, 2), Error);
}

TEST_CASE("haar unitaries") {
  const Matrix u1 = haar_unitary(1, 5);
  CHECK(std::abs(std::abs(u1(0, 0)) - 1.0) < 1e-15);
  CHECK((haar_unitary(4, 77) - haar_unitary(4, 77)).norm() == 0.0);
  CHECK((haar_unitary(4, 77) - haar_unitary(4, 78)).norm() > 1e-3);
  for (int d = 1; d <= 8; ++d) {
    const Matrix u = haar_unitary(d, static_cast<std::uint64_t>(d));
    CHECK((u.adjoint() * u - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("tensor and local application") {
  std::mt19937_64 rng(30);
  const PureBipartiteState a = random_state(2, 3, rng), b = random_state(3, 2, rng);
  const PureBipartiteState t = tensor(a, b);
  CHECK(t.dim_A() == 6);
  CHECK(t.dim_B() == 6);
  const Spectrum sa = schmidt_spectrum(a), sb = schmidt_spectrum(b);
  const std::vector<double> direct = oracle::kron_spectrum({sa.values().begin(), sa.values().end()},
                                                           {sb.values().begin(), sb.values().end()});
  const Spectrum st = schmidt_spectrum(t);
  for (std::size_t i = 0; i < st.size(); ++i) CHECK(std::abs(st[i] - direct[i]) < 1e-12);

  // (X (x) Y) acting on the flattened vector equals the Kronecker product.
  const Matrix x = haar_unitary(2, rng), y = haar_unitary(3, rng);
  CHECK((apply_local(x, y, a.amplitudes(), 2, 3) - kron(x, y) * a.amplitudes()).norm() < 1e-12);
}
