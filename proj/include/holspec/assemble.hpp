#pragma once

#include <cstdint>
#include <vector>

#include "holspec/domain.hpp"
#include "holspec/mesh.hpp"
#include "holspec/potential.hpp"

namespace holspec {

enum class BC { Neumann, Dirichlet };

// Stiffness, mass and potential matrices on one shared symmetric pattern
// (full storage, CSR).  The potential matrix keeps V unscaled; the coupling
// lambda is applied when the shifted matrix K + lambda*P - sigma*M is formed.
struct DiscreteOperator {
    std::int64_t n = 0;
    std::vector<std::int64_t> ptr;
    std::vector<std::int32_t> col;
    std::vector<double> kval, mval, pval;
    double lambda = 0.0;
    BC bc = BC::Neumann;
    std::vector<std::int32_t> line_offsets;  // block tridiagonal structure

    std::vector<double> shifted_values(double sigma) const;
};

DiscreteOperator assemble(const Mesh& mesh, const HolderSubgraphDomain& dom,
                          const PotentialField& V, double lambda, BC bc, bool parallel = true);

// exact integrals of h^sigma * phi_i * phi_j over one triangle, h linear with
// the given vertex values (exposed for tests)
void tri_power_phiphi(const Point verts[3], const double h[3], double sigma, double out[3][3]);

}  // namespace holspec
