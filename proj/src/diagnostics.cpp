#include "ghostfem/diagnostics.hpp"

#include <cmath>
#include <fstream>

#include "ghostfem/error.hpp"

namespace ghostfem {

EnergyRecord energies(const TimeSlice& slice, const MeshSpec& mesh, const ModelParams& model, double t) {
  require_slice_matches(slice, mesh);
  const int nx = mesh.nx;
  const int ny = mesh.spatial_ny();
  const bool planar = mesh.dims == Dims::d2p1;
  const double inv2hx = 0.5 / mesh.hx();
  const double inv2hy = planar ? 0.5 / mesh.hy() : 0.0;
  const double m2phi = model.m_phi * model.m_phi;
  const double m2chi = model.m_chi * model.m_chi;
  const double g = model.gamma;

  auto at = [nx](int ix, int iy) {
    return static_cast<std::size_t>(iy) * nx + static_cast<std::size_t>(ix);
  };
  auto grad2 = [&](const std::vector<double>& f, int ix, int iy) {
    const double dx = (f[at((ix + 1) % nx, iy)] - f[at((ix + nx - 1) % nx, iy)]) * inv2hx;
    double s = dx * dx;
    if (planar) {
      const double dy = (f[at(ix, (iy + 1) % ny)] - f[at(ix, (iy + ny - 1) % ny)]) * inv2hy;
      s += dy * dy;
    }
    return s;
  };

  // Wide accumulators keep the split identity at rounding level when the
  // ghost sector cancels most of the total.
  long double h = 0.0, h_phi = 0.0, h_chi = 0.0, h_int = 0.0;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const std::size_t n = at(ix, iy);
      const double phi = slice.phi[n];
      const double chi = slice.chi[n];
      const double kin_phi = 0.5 * (slice.u[n] * slice.u[n] + grad2(slice.phi, ix, iy) + m2phi * phi * phi);
      const double kin_chi = 0.5 * g * (slice.v[n] * slice.v[n] + grad2(slice.chi, ix, iy) + m2chi * chi * chi);
      const PotentialSplit split = split_potential(model.potential, phi, chi);
      h += kin_phi + kin_chi + potential_value(model.potential, phi, chi);
      h_phi += kin_phi + split.phi_self;
      h_chi += kin_chi + split.chi_self;
      h_int += split.interaction;
    }
  }
  const double cell = mesh.hx() * (planar ? mesh.hy() : 1.0);
  EnergyRecord r;
  r.t = t;
  r.H = static_cast<double>(h * cell);
  r.H_phi = static_cast<double>(h_phi * cell);
  r.H_chi = static_cast<double>(h_chi * cell);
  r.H_int = static_cast<double>(h_int * cell);
  return r;
}

double rms(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double x : values) s += x * x;
  return std::sqrt(s / static_cast<double>(values.size()));
}

void deviation_series(std::vector<EnergyRecord>& records) {
  if (records.empty()) return;
  const double phi0 = records.front().H_phi;
  const double chi0 = records.front().H_chi;
  for (EnergyRecord& r : records) {
    r.dev_phi = std::abs(r.H_phi - phi0);
    r.dev_chi = std::abs(r.H_chi - chi0);
  }
}

void write_energies_csv(const std::filesystem::path& path, const std::vector<EnergyRecord>& records) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.precision(17);
  out << "t,H,H_phi,H_chi,H_int,dev_phi,dev_chi\n";
  for (const EnergyRecord& r : records) {
    out << r.t << ',' << r.H << ',' << r.H_phi << ',' << r.H_chi << ',' << r.H_int << ',' << r.dev_phi << ','
        << r.dev_chi << '\n';
  }
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace ghostfem
