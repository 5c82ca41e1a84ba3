#include "ghostfem/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>
#include <lapacke.h>

#include "ghostfem/error.hpp"

namespace ghostfem {

namespace {

// The FFTW planner is not re-entrant; sweeps build plans from several threads.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr int kBand = 7;  // a level couples to its neighbours: 4 + 3 off-diagonals
constexpr int kLdab = 3 * kBand + 1;

struct Periodic1d {
  std::vector<double> mass, stiff;  // circulant eigenvalues per wavenumber
};

Periodic1d periodic_eigenvalues(int n, double h) {
  Periodic1d e;
  for (int k = 0; k < n; ++k) {
    const double c = std::cos(2.0 * std::numbers::pi * k / n);
    e.mass.push_back(h / 6.0 * (4.0 + 2.0 * c));
    e.stiff.push_back((2.0 - 2.0 * c) / h);
  }
  return e;
}

}  // namespace

struct SpectralPreconditioner::Impl {
  MeshSpec mesh;
  ModelParams model;
  int nx = 0, ny = 0, nt = 0, npl = 0, n = 0;
  std::vector<double> mode_space, mode_mass;  // per spatial mode
  std::vector<double> ab;                     // banded LU per mode
  std::vector<lapack_int> ipiv;
  bool factored = false;

  fftw_complex* buf = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    if (buf) fftw_free(buf);
  }

  double* band(int mode) { return &ab[static_cast<std::size_t>(mode) * kLdab * n]; }

  void assemble(int mode, const std::vector<PotentialHessian>& layers) {
    double* a = band(mode);
    std::fill(a, a + kLdab * n, 0.0);
    auto add = [&](int i, int j, double v) { a[j * kLdab + 2 * kBand + i - j] += v; };
    for (int c = 0; c < 4; ++c) add(c, c, 1.0);  // pinned initial level

    const double sx = mode_space[mode], mm = mode_mass[mode];
    const double ht = mesh.ht();
    const double mt[2][2] = {{ht / 3.0, ht / 6.0}, {ht / 6.0, ht / 3.0}};
    const double dt[2][2] = {{-0.5, 0.5}, {-0.5, 0.5}};
    const double g = model.gamma;
    const double m2p = model.m_phi * model.m_phi, m2c = model.m_chi * model.m_chi;
    for (int e = 0; e < nt - 1; ++e) {
      const PotentialHessian& h = layers[e];
      for (int al = 0; al < 2; ++al) {
        const int ra = e + al;
        if (ra == 0) continue;
        for (int be = 0; be < 2; ++be) {
          const int cb = e + be;
          const int k1 = 4 * ra, k2 = k1 + 1, g1 = k1 + 2, g2 = k1 + 3;
          const int phi = 4 * cb, u = phi + 1, chi = phi + 2, v = phi + 3;
          const double M = mt[al][be], D = dt[al][be];
          add(k1, phi, (sx + m2p * mm + mm * h.phi_phi) * M);
          add(k1, u, mm * D);
          add(k1, chi, mm * h.phi_chi * M);
          add(k2, phi, mm * D);
          add(k2, u, -mm * M);
          add(g1, chi, (sx + m2c * mm + g * mm * h.chi_chi) * M);
          add(g1, v, mm * D);
          add(g1, phi, g * mm * h.phi_chi * M);
          add(g2, chi, mm * D);
          add(g2, v, -mm * M);
        }
      }
    }
  }
};

SpectralPreconditioner::SpectralPreconditioner(const MeshSpec& mesh, const ModelParams& model)
    : impl_(std::make_unique<Impl>()) {
  mesh.validate();
  Impl& p = *impl_;
  p.mesh = mesh;
  p.model = model;
  p.nx = mesh.nx;
  p.ny = mesh.spatial_ny();
  p.nt = mesh.nt;
  p.npl = static_cast<int>(mesh.nodes_per_level());
  p.n = 4 * mesh.nt;

  const Periodic1d ex = periodic_eigenvalues(p.nx, mesh.hx());
  Periodic1d ey{{1.0}, {0.0}};
  if (mesh.dims == Dims::d2p1) ey = periodic_eigenvalues(p.ny, mesh.hy());
  for (int ky = 0; ky < p.ny; ++ky) {
    for (int kx = 0; kx < p.nx; ++kx) {
      p.mode_space.push_back(ex.stiff[kx] * ey.mass[ky] + ex.mass[kx] * ey.stiff[ky]);
      p.mode_mass.push_back(ex.mass[kx] * ey.mass[ky]);
    }
  }
  p.ab.resize(static_cast<std::size_t>(p.npl) * kLdab * p.n);
  p.ipiv.resize(static_cast<std::size_t>(p.npl) * p.n);

  const int rank = mesh.dims == Dims::d2p1 ? 2 : 1;
  int dims[2] = {p.ny, p.nx};
  int* shape = rank == 2 ? dims : dims + 1;
  std::lock_guard lock(planner_mutex());
  p.buf = fftw_alloc_complex(static_cast<std::size_t>(p.npl) * p.n);
  if (!p.buf) throw Error("cannot allocate FFT workspace");
  p.forward = fftw_plan_many_dft(rank, shape, p.n, p.buf, nullptr, 1, p.npl, p.buf, nullptr, 1, p.npl,
                                 FFTW_FORWARD, FFTW_ESTIMATE);
  p.backward = fftw_plan_many_dft(rank, shape, p.n, p.buf, nullptr, 1, p.npl, p.buf, nullptr, 1, p.npl,
                                  FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!p.forward || !p.backward) throw Error("FFT planning failed");
}

SpectralPreconditioner::~SpectralPreconditioner() = default;
SpectralPreconditioner::SpectralPreconditioner(SpectralPreconditioner&&) noexcept = default;
SpectralPreconditioner& SpectralPreconditioner::operator=(SpectralPreconditioner&&) noexcept = default;

bool SpectralPreconditioner::update(const std::vector<PotentialHessian>& layers) {
  Impl& p = *impl_;
  if (layers.size() != static_cast<std::size_t>(p.nt - 1)) {
    throw SizeMismatch("one potential Hessian per time layer expected");
  }
  p.factored = false;
  for (int m = 0; m < p.npl; ++m) {
    p.assemble(m, layers);
    const lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, p.n, p.n, kBand, kBand, p.band(m), kLdab,
                                           &p.ipiv[static_cast<std::size_t>(m) * p.n]);
    if (info != 0) return false;
  }
  p.factored = true;
  return true;
}

bool SpectralPreconditioner::ready() const { return impl_->factored; }

Vector SpectralPreconditioner::solve(const Vector& rhs) const {
  Impl& p = *impl_;
  if (!p.factored) throw SingularMatrix("preconditioner used without a successful update");
  if (rhs.size() != static_cast<Eigen::Index>(p.npl) * p.n) {
    throw SizeMismatch("right-hand side does not match the slab");
  }
  const std::size_t npl = static_cast<std::size_t>(p.npl);
  auto at = [&](int row, int s) -> fftw_complex& { return p.buf[static_cast<std::size_t>(row) * npl + s]; };

  // Row r = 4 * level + component of the per-mode system.
  for (int it = 0; it < p.nt; ++it) {
    for (int s = 0; s < p.npl; ++s) {
      for (int c = 0; c < 4; ++c) {
        fftw_complex& z = at(4 * it + c, s);
        z[0] = rhs[4 * (static_cast<Eigen::Index>(it) * p.npl + s) + c];
        z[1] = 0.0;
      }
    }
  }
  fftw_execute(p.forward);

  std::vector<double> b(2 * static_cast<std::size_t>(p.n));
  for (int m = 0; m < p.npl; ++m) {
    for (int r = 0; r < p.n; ++r) {
      b[r] = at(r, m)[0];
      b[p.n + r] = at(r, m)[1];
    }
    LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', p.n, kBand, kBand, 2, p.band(m), kLdab,
                   &p.ipiv[static_cast<std::size_t>(m) * p.n], b.data(), p.n);
    for (int r = 0; r < p.n; ++r) {
      at(r, m)[0] = b[r];
      at(r, m)[1] = b[p.n + r];
    }
  }
  fftw_execute(p.backward);

  Vector out(rhs.size());
  const double scale = 1.0 / static_cast<double>(p.npl);
  for (int it = 0; it < p.nt; ++it) {
    for (int s = 0; s < p.npl; ++s) {
      for (int c = 0; c < 4; ++c) {
        out[4 * (static_cast<Eigen::Index>(it) * p.npl + s) + c] = at(4 * it + c, s)[0] * scale;
      }
    }
  }
  return out;
}

}  // namespace ghostfem
