#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "burstrec/grid.hpp"

namespace burstrec {

/// Finite-dimensional model space for burst shapes together with the sampler
/// family used to observe them. Holds the cross-Gram matrix
/// G[i][j] = <basis_i, sampler_j> and a precomputed minimum-norm synthesis
/// operator mapping observed coefficients back to basis weights.
struct ShapeSpace {
    std::vector<GridFunction> basis;
    std::vector<GridFunction> samplers;
    Eigen::MatrixXcd cross_gram;
    Eigen::MatrixXcd synthesis;
    double condition = 0.0;
    double stability = 0.0;

    static ShapeSpace build(std::vector<GridFunction> basis_in,
                            std::vector<GridFunction> samplers_in) {
        if (basis_in.empty()) throw config_error("shape space: empty basis");
        if (samplers_in.size() < basis_in.size())
            throw config_error("shape space: fewer samplers than basis functions");
        for (const auto& b : basis_in) require_same_grid(basis_in.front(), b, "shape space basis");
        for (const auto& g : samplers_in) require_same_grid(basis_in.front(), g, "shape space samplers");

        const std::size_t nb = basis_in.size();
        const std::size_t ns = samplers_in.size();
        Eigen::MatrixXcd gram(nb, ns);
        for (std::size_t i = 0; i < nb; ++i)
            for (std::size_t j = 0; j < ns; ++j)
                gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    inner_product(basis_in[i], samplers_in[j]);

        Eigen::MatrixXcd gt = gram.transpose();
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gt, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        const double cutoff = static_cast<double>(std::max(nb, ns)) *
                              std::numeric_limits<double>::epsilon() * sv(0);
        if (sv(sv.size() - 1) <= cutoff)
            throw config_error("shape space: cross-Gram matrix is rank deficient");

        ShapeSpace space;
        space.basis = std::move(basis_in);
        space.samplers = std::move(samplers_in);
        space.cross_gram = std::move(gram);
        space.condition = sv(0) / sv(sv.size() - 1);
        space.synthesis = svd.matrixV() * sv.cwiseInverse().asDiagonal() *
                          svd.matrixU().adjoint();

        Eigen::MatrixXcd mass(nb, nb);
        for (std::size_t i = 0; i < nb; ++i)
            for (std::size_t j = 0; j < nb; ++j)
                mass(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    inner_product(space.basis[i], space.basis[j]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(mass);
        Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0);
        Eigen::MatrixXcd root = eig.eigenvectors() *
                                lambda.cwiseSqrt().asDiagonal().toDenseMatrix().cast<complex>() *
                                eig.eigenvectors().adjoint();
        space.stability =
            Eigen::JacobiSVD<Eigen::MatrixXcd>(root * space.synthesis).singularValues()(0);
        return space;
    }
};

/// Coefficient vector <h, g_j> of a shape against every sampler.
inline std::vector<complex> analyze(const ShapeSpace& space, const GridFunction& h) {
    require_same_grid(space.basis.front(), h, "analyze");
    std::vector<complex> out(space.samplers.size());
    for (std::size_t j = 0; j < space.samplers.size(); ++j)
        out[j] = inner_product(h, space.samplers[j]);
    return out;
}

/// Minimum-norm least-squares reconstruction of a shape from sampler
/// coefficients. Exact on elements of the model space.
inline GridFunction synthesize(const ShapeSpace& space, const std::vector<complex>& coeffs) {
    if (coeffs.size() != space.samplers.size())
        throw std::invalid_argument("synthesize: coefficient count does not match samplers");
    Eigen::VectorXcd c(static_cast<Eigen::Index>(coeffs.size()));
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        c(static_cast<Eigen::Index>(j)) = coeffs[j];
    Eigen::VectorXcd weights = space.synthesis * c;
    GridFunction out = GridFunction::zeros(space.basis.front().grid);
    for (std::size_t i = 0; i < space.basis.size(); ++i)
        out = axpy(weights(static_cast<Eigen::Index>(i)), space.basis[i], out);
    return out;
}

/// Operator norm of the coefficient-to-shape map: a coefficient perturbation
/// e moves the reconstruction by at most this constant times the Euclidean
/// norm of e.
inline double lipschitz_constant(const ShapeSpace& space) { return space.stability; }

}  // namespace burstrec
