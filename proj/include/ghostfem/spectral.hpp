#pragma once

#include <memory>
#include <vector>

#include "ghostfem/fields.hpp"
#include "ghostfem/mesh.hpp"
#include "ghostfem/model.hpp"

namespace ghostfem {

/// Approximate inverse of the slab Jacobian for iterative solves.
///
/// The periodic spatial directions are diagonalised by a discrete Fourier
/// transform. With the potential Hessian replaced by its mean over each time
/// layer, every spatial mode decouples into a banded system over the temporal
/// levels, factored once per update(). For the free theory the operator is
/// the exact inverse.
class SpectralPreconditioner {
 public:
  SpectralPreconditioner(const MeshSpec& mesh, const ModelParams& model);
  ~SpectralPreconditioner();
  SpectralPreconditioner(SpectralPreconditioner&&) noexcept;
  SpectralPreconditioner& operator=(SpectralPreconditioner&&) noexcept;

  /// One entry per time layer (nt - 1). Returns false if any mode is singular.
  bool update(const std::vector<PotentialHessian>& layers);

  bool ready() const;

  Vector solve(const Vector& rhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ghostfem
