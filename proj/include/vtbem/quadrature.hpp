#ifndef VTBEM_QUADRATURE_HPP
#define VTBEM_QUADRATURE_HPP

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "vtbem/geometry.hpp"
#include "vtbem/kernels.hpp"

namespace vtbem {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

struct TargetPoint {
    Vec2 x, nx;
    double kappa = 0.0;
    double s = 0.0, t = 0.0;
    const BoundaryComponent* on_comp = nullptr; // null for off-surface targets
    int on_panel = -1;
};

std::vector<TargetPoint> surface_targets(const BoundaryComponent& comp);

struct SourcePoint {
    Vec2 y, ny;
    double kappa = 0.0;
    double s = 0.0, t = 0.0;
    const Curve* curve = nullptr;
    const BoundaryComponent* comp = nullptr;
};

class KernelDef {
public:
    virtual ~KernelDef() = default;
    virtual Complex eval(const TargetPoint& tgt, const SourcePoint& src) const = 0;
    virtual bool integrable() const { return true; }
    virtual const char* name() const = 0;
    // near-quadrature trigger; default: target within one panel length of the
    // panel bounding circle
    virtual bool near(const TargetPoint& tgt, const Panel& p, const BoundaryComponent& comp) const;
};

enum class LayerKind { S, D, Sprime, Dprime, CombinedDpSpp, SppRaw, DppRaw };

std::unique_ptr<KernelDef> make_layer_kernel(LayerKind kind, double k);

struct AssembleOptions {
    double tol = 1e-12;
    int max_depth = 60;
    int nthreads = 1;
};

struct OperatorMatrix {
    Mat m;
    std::string kernel;
    int nsrc = 0, ntgt = 0;
};

// Dense matrix mapping base-node density values of the source components to
// integral values at the targets. Fins integrate against the parity-extended
// density, folding into base columns.
OperatorMatrix assemble_block(const KernelDef& kernel,
                              const std::vector<const BoundaryComponent*>& sources, bool use_fins,
                              const std::vector<TargetPoint>& targets, const AssembleOptions& opt);

// spectral d/ds on each panel (block diagonal)
Mat tangential_deriv_matrix(const BoundaryComponent& comp);
// row functional extracting d(phi)/ds at an endpoint from component node values
Eigen::RowVectorXcd endpoint_deriv_row(const BoundaryComponent& comp, int end);
std::pair<Complex, Complex> endpoint_deriv(const BoundaryComponent& comp, const Vec& values);

} // namespace vtbem

#endif
