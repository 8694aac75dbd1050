#pragma once

/// One evaluation of the whole chain at fixed (alpha, beta, t):
/// moments -> orthogonal system -> auxiliaries.  A TFamily holds such
/// snapshots on a five-point t-stencil so that t-derivatives of any
/// pipeline quantity can be taken by central differences.

#include "pjlab/auxiliaries.hpp"
#include "pjlab/differentiate.hpp"

#include <array>
#include <functional>
#include <memory>

namespace pjlab {

struct Snapshot {
  WeightParams params;
  PrecisionCtx ctx;
  std::vector<MomentTable> tables;  ///< shifts (0,0), (0,-1) and, for t > 0, (-1,0)
  OrthoSystem sys;
  AuxSet aux;

  const MomentTable& table(const MomentShift& s) const {
    const MomentTable* t = detail::find_table(tables, s);
    if (!t) throw DomainError("snapshot has no moment table for shift " + to_string(s));
    return *t;
  }
};

/// The moment tables a snapshot needs.  Runs entirely at ctx.working_bits,
/// so calls for different t may run concurrently.
inline std::vector<MomentTable> snapshot_tables(const WeightParams& p, int n_max, const PrecisionCtx& ctx,
                                                bool cross_check) {
  p.validate();
  ctx.validate();
  if (n_max < 0) throw DomainError("build_snapshot: n_max must be >= 0");
  PrecisionScope scope(ctx.working_bits);
  std::vector<MomentShift> shifts{kPlainShift, kInverseComplementShift};
  if (p.t != 0) shifts.push_back(kInverseXShift);
  return moment_table(p, 2 * n_max + 1, shifts, ctx, cross_check);
}

/// Orthogonal system and auxiliaries from precomputed tables.
inline Snapshot assemble_snapshot(const WeightParams& p, int n_max, const PrecisionCtx& ctx,
                                  std::vector<MomentTable> tables) {
  PrecisionScope scope(ctx.working_bits);
  Snapshot s;
  s.params = p;
  s.ctx = ctx;
  s.tables = std::move(tables);
  s.sys = build_ortho(s.table(kPlainShift), n_max, ctx);
  s.aux = aux_fill(s.sys, s.tables, ctx);
  return s;
}

/// Builds the pipeline for n = 0..n_max.  The polynomial of degree
/// n_max + 1 is included so identities at n = n_max can reach it.
/// `cross_check` compares every moment across the two routes.
inline Snapshot build_snapshot(const WeightParams& p, int n_max, const PrecisionCtx& ctx, bool cross_check = true) {
  return assemble_snapshot(p, n_max, ctx, snapshot_tables(p, n_max, ctx, cross_check));
}

/// Snapshots at t + k h, k = -2..2.
struct TFamily {
  Stencil stencil;
  std::array<std::shared_ptr<const Snapshot>, 5> at;

  const Snapshot& center() const { return *at[2]; }

  /// d/dt (order 1) or d^2/dt^2 (order 2) of a scalar read off a snapshot.
  FdEstimate derivative(const std::function<Real(const Snapshot&)>& g, int order) const {
    PrecisionScope scope(center().ctx.working_bits);
    std::array<Real, 5> v;
    for (std::size_t k = 0; k < 5; ++k) v[k] = g(*at[k]);
    return stencil_derivative(std::span<const Real, 5>(v), stencil.h, order);
  }
};

/// `center` is reused as the middle point; the four off-centre snapshots
/// are built without the moment cross-check.
inline TFamily build_family(std::shared_ptr<const Snapshot> center, const PrecisionCtx& stencil_ctx) {
  if (!center) throw DomainError("build_family: missing centre snapshot");
  TFamily f;
  f.stencil = Stencil::around(center->params.t, stencil_ctx);
  PrecisionScope scope(center->ctx.working_bits);
  for (int k = -2; k <= 2; ++k) {
    if (k == 0) {
      f.at[2] = center;
      continue;
    }
    f.at[k + 2] = std::make_shared<const Snapshot>(
        build_snapshot(center->params.at_t(f.stencil.point(k)), center->sys.n_max, center->ctx, false));
  }
  return f;
}

struct HankelLogDerivative {
  Real H;
  Real Htil;
  Real error_proxy;
};

/// H_n = t d/dt ln D_n by a stencil over ln D_n; H~_n = H_n - n(n+alpha+beta).
inline HankelLogDerivative hankel_Hn(const TFamily& fam, int n) {
  const Snapshot& c = fam.center();
  if (n < 0 || n > c.sys.n_max + 1) throw DomainError("hankel_Hn: n outside the built system");
  PrecisionScope scope(c.ctx.working_bits);
  if (n == 0) return {Real(0), Real(0), Real(0)};
  FdEstimate d = fam.derivative([n](const Snapshot& s) { return Real(boost::multiprecision::log(s.sys.D[n])); }, 1);
  const Real& t = c.params.t;
  HankelLogDerivative out;
  out.H = t * d.value;
  out.Htil = out.H - n * (n + c.params.alpha + c.params.beta);
  out.error_proxy = t * d.error_proxy;
  return out;
}

}  // namespace pjlab
