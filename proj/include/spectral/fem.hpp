#pragma once

#include "spectral/geometry.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace spectral {

/// Compressed sparse row matrix with sorted column indices per row.
struct SparseMatrix {
    int n = 0;
    std::vector<int> row_offsets;
    std::vector<int> columns;
    std::vector<double> values;

    /// Entry (i, j), zero when not stored.
    double at(int i, int j) const;
    std::vector<double> multiply(std::span<const double> x) const;
    double quadratic_form(std::span<const double> x) const;
    std::size_t nonzeros() const { return values.size(); }
};

/// P1 stiffness matrix, entries integral of grad(phi_i) . grad(phi_j).
SparseMatrix assemble_stiffness(const Mesh& mesh);

/// Consistent P1 mass matrix; element block area/12 * [[2,1,1],[1,2,1],[1,1,2]].
SparseMatrix assemble_mass(const Mesh& mesh);

enum class BoundaryCondition { neumann, dirichlet, mixed_dn };

std::string_view to_string(BoundaryCondition bc);

struct EigenPair {
    double eigenvalue = 0.0;
    /// Nodal values on the full mesh, M-normalized; zero on constrained nodes.
    std::vector<double> eigenvector;
    BoundaryCondition bc = BoundaryCondition::neumann;
    /// ||K v - lambda M v||_2 / (lambda ||M v||_2).
    double residual = 0.0;
    int iterations = 0;
};

struct EigenSolverOptions {
    double eigenvalue_tolerance = 1e-10;
    double residual_tolerance = 1e-10;
    int max_iterations = 10000;
    unsigned seed = 42;
};

/// First nontrivial Neumann eigenvalue: smallest eigenvalue of K v = mu M v on
/// the M-orthogonal complement of constants.
EigenPair solve_neumann_mu1(const Mesh& mesh, const EigenSolverOptions& options = {});

/// First Dirichlet eigenvalue with every outer boundary node eliminated.
EigenPair solve_dirichlet_lambda1(const Mesh& mesh, const EigenSolverOptions& options = {});

/// First eigenvalue with zero data on edges tagged `dirichlet_tag` and natural
/// conditions elsewhere.
EigenPair solve_mixed_dn(const Mesh& mesh, EdgeTag dirichlet_tag = EdgeTag::diagonal,
                         const EigenSolverOptions& options = {});

/// Order-2 Richardson extrapolation from estimates at h and h/2.
double richardson(double coarse, double fine, int order = 2);

} // namespace spectral
