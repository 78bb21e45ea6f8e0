#pragma once
#include <functional>

#include "mlq/algebra.hpp"

namespace mlq {

using VecX = Eigen::VectorXcd;
using Field = std::function<VecX(cplx)>;

enum class JetMode { Central, Richardson };

// Value and derivatives up to second order in z, z-bar from 3x3 central stencils.
// Central: one step h, O(h^2).  Richardson: steps h, h/2, h/4; the result is the
// extrapolation from (h/2, h/4) and err compares it with the one from (h, h/2).
struct Jet {
    VecX f, z, zb, zz, zzb, zbzb;
    double h = 0;
    double err = 0;  // relative to max(1, largest derivative entry)
};

Jet jet(const Field& f, cplx z0, double h, JetMode mode = JetMode::Richardson);

}  // namespace mlq
