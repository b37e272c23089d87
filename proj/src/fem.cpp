#include "spectral/fem.hpp"

#include "spectral/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <tuple>

namespace spectral {

namespace {

struct Triplet {
    int row;
    int col;
    double value;
};

SparseMatrix from_triplets(int n, std::vector<Triplet> triplets) {
    // Stable sort keeps the element order inside each (row, col) bucket, so the
    // summation order is deterministic.
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    SparseMatrix out;
    out.n = n;
    out.row_offsets.assign(n + 1, 0);
    for (std::size_t i = 0; i < triplets.size();) {
        const int row = triplets[i].row;
        const int col = triplets[i].col;
        double sum = 0.0;
        for (; i < triplets.size() && triplets[i].row == row && triplets[i].col == col; ++i) {
            sum += triplets[i].value;
        }
        out.columns.push_back(col);
        out.values.push_back(sum);
        ++out.row_offsets[row + 1];
    }
    std::partial_sum(out.row_offsets.begin(), out.row_offsets.end(), out.row_offsets.begin());
    return out;
}

double checked_area(const Mesh& mesh, std::size_t e) {
    const double area = signed_area(mesh, e);
    const auto& el = mesh.elements[e];
    double scale = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Point2 a = mesh.nodes[el[i]];
        const Point2 b = mesh.nodes[el[(i + 1) % 3]];
        scale = std::max(scale, (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y));
    }
    if (!(area > 1e-14 * scale)) {
        throw AssemblyError("degenerate or inverted element " + std::to_string(e));
    }
    return area;
}

using EigenSparse = Eigen::SparseMatrix<double>;

EigenSparse to_eigen(const SparseMatrix& a, const std::vector<int>& free_index, int free_count) {
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(a.values.size());
    for (int i = 0; i < a.n; ++i) {
        const int fi = free_index[i];
        if (fi < 0) {
            continue;
        }
        for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
            const int fj = free_index[a.columns[k]];
            if (fj >= 0) {
                entries.emplace_back(fi, fj, a.values[k]);
            }
        }
    }
    EigenSparse out(free_count, free_count);
    out.setFromTriplets(entries.begin(), entries.end());
    return out;
}

// Smallest eigenpair of K v = lambda M v restricted to the unconstrained
// nodes. For Neumann problems the iterates are kept M-orthogonal to constants.
EigenPair smallest_eigenpair(const Mesh& mesh, const std::vector<char>& constrained, BoundaryCondition bc,
                             const EigenSolverOptions& options) {
    const SparseMatrix stiffness = assemble_stiffness(mesh);
    const SparseMatrix mass = assemble_mass(mesh);
    const int n = stiffness.n;

    std::vector<int> free_index(n, -1);
    int free_count = 0;
    for (int i = 0; i < n; ++i) {
        if (!constrained[i]) {
            free_index[i] = free_count++;
        }
    }
    if (free_count == 0) {
        throw ParameterError("eigenproblem has no free nodes");
    }

    const EigenSparse k = to_eigen(stiffness, free_index, free_count);
    const EigenSparse m = to_eigen(mass, free_index, free_count);
    const bool deflate = bc == BoundaryCondition::neumann;

    // The Neumann stiffness is singular; shift by -1/|Omega|, which scales with
    // the eigenvalues and keeps the iteration covariant under dilation.
    const double shift = deflate ? -1.0 / total_area(mesh) : 0.0;
    const EigenSparse shifted = k - shift * m;
    Eigen::SimplicialLDLT<EigenSparse> factor(shifted);
    if (factor.info() != Eigen::Success) {
        throw NumericError("sparse factorization failed");
    }

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(free_count);
    const Eigen::VectorXd m_ones = m * ones;
    const double total_mass = ones.dot(m_ones);
    const int block = std::max(1, std::min(4, free_count - (deflate ? 1 : 0)));

    // Projects out constants (Neumann) and M-orthonormalizes the block.
    auto orthonormalize = [&](Eigen::MatrixXd& v) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j < v.cols(); ++j) {
                if (deflate) {
                    v.col(j) -= (m_ones.dot(v.col(j)) / total_mass) * ones;
                }
                for (int i = 0; i < j; ++i) {
                    v.col(j) -= v.col(i).dot(m * v.col(j)) * v.col(i);
                }
                v.col(j) /= std::sqrt(v.col(j).dot(m * v.col(j)));
            }
        }
    };

    std::mt19937 rng(options.seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    Eigen::MatrixXd x(free_count, block);
    for (int j = 0; j < block; ++j) {
        for (int i = 0; i < n; ++i) {
            const double r = uniform(rng);
            if (free_index[i] >= 0) {
                x(free_index[i], j) = r;
            }
        }
    }
    orthonormalize(x);

    // Block shift-invert iteration with Rayleigh-Ritz.
    double lambda = std::numeric_limits<double>::infinity();
    double residual = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= options.max_iterations; ++it) {
        Eigen::MatrixXd y(free_count, block);
        for (int j = 0; j < block; ++j) {
            y.col(j) = factor.solve(m * x.col(j));
        }
        orthonormalize(y);
        const Eigen::MatrixXd ky = k * y;
        const Eigen::MatrixXd reduced = y.transpose() * ky;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(0.5 * (reduced + reduced.transpose()));
        x = y * ritz.eigenvectors();
        const double next = ritz.eigenvalues()[0];
        const Eigen::VectorXd v = x.col(0);
        const Eigen::VectorXd mv = m * v;
        residual = (k * v - next * mv).norm() / (std::abs(next) * mv.norm());
        const double change = std::abs(next - lambda) / std::abs(next);
        lambda = next;
        if (change <= options.eigenvalue_tolerance && residual <= options.residual_tolerance) {
            EigenPair pair;
            pair.eigenvalue = lambda;
            pair.bc = bc;
            pair.residual = residual;
            pair.iterations = it;
            pair.eigenvector.assign(n, 0.0);
            const double norm = std::sqrt(v.dot(mv));
            for (int i = 0; i < n; ++i) {
                if (free_index[i] >= 0) {
                    pair.eigenvector[i] = v[free_index[i]] / norm;
                }
            }
            return pair;
        }
    }
    throw ConvergenceError("shift-invert iteration did not converge in " +
                               std::to_string(options.max_iterations) + " iterations",
                           residual);
}

} // namespace

double SparseMatrix::at(int i, int j) const {
    const auto first = columns.begin() + row_offsets[i];
    const auto last = columns.begin() + row_offsets[i + 1];
    const auto it = std::lower_bound(first, last, j);
    return (it != last && *it == j) ? values[it - columns.begin()] : 0.0;
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
            sum += values[k] * x[columns[k]];
        }
        y[i] = sum;
    }
    return y;
}

double SparseMatrix::quadratic_form(std::span<const double> x) const {
    const auto y = multiply(x);
    return std::inner_product(y.begin(), y.end(), x.begin(), 0.0);
}

SparseMatrix assemble_stiffness(const Mesh& mesh) {
    std::vector<Triplet> triplets;
    triplets.reserve(9 * mesh.elements.size());
    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
        const double area = checked_area(mesh, e);
        const auto& el = mesh.elements[e];
        // grad(phi_i) = (y_j - y_k, x_k - x_j) / (2 area) for cyclic (i, j, k)
        double gx[3];
        double gy[3];
        for (int i = 0; i < 3; ++i) {
            const Point2 pj = mesh.nodes[el[(i + 1) % 3]];
            const Point2 pk = mesh.nodes[el[(i + 2) % 3]];
            gx[i] = (pj.y - pk.y) / (2.0 * area);
            gy[i] = (pk.x - pj.x) / (2.0 * area);
        }
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                triplets.push_back({el[i], el[j], area * (gx[i] * gx[j] + gy[i] * gy[j])});
            }
        }
    }
    return from_triplets(static_cast<int>(mesh.nodes.size()), std::move(triplets));
}

SparseMatrix assemble_mass(const Mesh& mesh) {
    std::vector<Triplet> triplets;
    triplets.reserve(9 * mesh.elements.size());
    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
        const double area = checked_area(mesh, e);
        const auto& el = mesh.elements[e];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                triplets.push_back({el[i], el[j], area / 12.0 * (i == j ? 2.0 : 1.0)});
            }
        }
    }
    return from_triplets(static_cast<int>(mesh.nodes.size()), std::move(triplets));
}

std::string_view to_string(BoundaryCondition bc) {
    switch (bc) {
    case BoundaryCondition::neumann:
        return "neumann";
    case BoundaryCondition::dirichlet:
        return "dirichlet";
    case BoundaryCondition::mixed_dn:
        return "mixed_dn";
    }
    return "unknown";
}

EigenPair solve_neumann_mu1(const Mesh& mesh, const EigenSolverOptions& options) {
    const std::vector<char> constrained(mesh.nodes.size(), 0);
    return smallest_eigenpair(mesh, constrained, BoundaryCondition::neumann, options);
}

EigenPair solve_dirichlet_lambda1(const Mesh& mesh, const EigenSolverOptions& options) {
    std::vector<char> constrained(mesh.nodes.size(), 0);
    for (int i : tagged_nodes(mesh, EdgeTag::outer)) {
        constrained[i] = 1;
    }
    return smallest_eigenpair(mesh, constrained, BoundaryCondition::dirichlet, options);
}

EigenPair solve_mixed_dn(const Mesh& mesh, EdgeTag dirichlet_tag, const EigenSolverOptions& options) {
    const auto nodes = tagged_nodes(mesh, dirichlet_tag);
    if (nodes.empty()) {
        throw ParameterError("mixed problem: mesh has no edge with the requested Dirichlet tag");
    }
    std::vector<char> constrained(mesh.nodes.size(), 0);
    for (int i : nodes) {
        constrained[i] = 1;
    }
    return smallest_eigenpair(mesh, constrained, BoundaryCondition::mixed_dn, options);
}

double richardson(double coarse, double fine, int order) {
    const double factor = std::ldexp(1.0, order);
    return (factor * fine - coarse) / (factor - 1.0);
}

} // namespace spectral
