#pragma once

// Brute-force reference computations used only by the tests. None of these go through the library's
// tensor / measurement / SVD code paths.

#include "sqt/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

using sqt::Complex;
using sqt::ComplexMatrix;
using sqt::ComplexVector;

inline ComplexVector kron(const ComplexVector &a, const ComplexVector &b) {
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        for (Eigen::Index j = 0; j < b.size(); ++j) out(i * b.size() + j) = a(i) * b(j);
    return out;
}

inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index k = 0; k < b.rows(); ++k)
                for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

inline double entropy(const std::vector<double> &w) {
    double s = 0.0;
    for (double x : w)
        if (x > 0.0) s += -x * std::log(x);
    return s;
}

// Joint eigenvector for multi-index j, built by explicit Kronecker products of basis columns.
inline ComplexVector joint_vector(const std::vector<ComplexMatrix> &bases, const std::vector<std::size_t> &j) {
    ComplexVector v = bases[0].col(static_cast<Eigen::Index>(j[0]));
    for (std::size_t k = 1; k < bases.size(); ++k) v = kron(v, ComplexVector(bases[k].col(static_cast<Eigen::Index>(j[k]))));
    return v;
}

// Visits every multi-index of the given dims in row-major order.
inline void for_each_index(const std::vector<std::size_t> &dims, const std::function<void(const std::vector<std::size_t> &)> &f) {
    std::vector<std::size_t> j(dims.size(), 0);
    while (true) {
        f(j);
        std::size_t k = dims.size();
        while (k > 0) {
            --k;
            if (++j[k] < dims[k]) break;
            j[k] = 0;
            if (k == 0) return;
        }
        if (dims.empty()) return;
    }
}

// |<phi_j1 (x) ... (x) phi_jn, Phi>|^2 for every joint basis vector, row-major.
inline std::vector<double> product_basis_weights(const ComplexVector &phi, const std::vector<ComplexMatrix> &bases) {
    std::vector<std::size_t> dims;
    for (const auto &b : bases) dims.push_back(static_cast<std::size_t>(b.cols()));
    std::vector<double> w;
    for_each_index(dims, [&](const auto &j) { w.push_back(std::norm(joint_vector(bases, j).dot(phi))); });
    return w;
}

// Schmidt weights as eigenvalues of the reduced density matrix rho_1 = C C^dag, descending.
inline std::vector<double> schmidt_weights_via_density(const ComplexVector &phi, std::size_t d1, std::size_t d2) {
    ComplexMatrix c(d1, d2);
    for (std::size_t i = 0; i < d1; ++i)
        for (std::size_t k = 0; k < d2; ++k) c(i, k) = phi(static_cast<Eigen::Index>(i * d2 + k));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(c * c.adjoint());
    std::vector<double> w(eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size());
    std::sort(w.rbegin(), w.rend());
    return w;
}

// Full-space operator for a 2-site gate on factors (i, j), assembled entry by entry.
inline ComplexMatrix embed_two_site(const std::vector<std::size_t> &dims, std::size_t i, std::size_t j, const ComplexMatrix &u) {
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    std::vector<std::vector<std::size_t>> indices;
    for_each_index(dims, [&](const auto &idx) { indices.push_back(idx); });
    ComplexMatrix big = ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            bool others_equal = true;
            for (std::size_t k = 0; k < dims.size(); ++k)
                if (k != i && k != j && indices[r][k] != indices[c][k]) others_equal = false;
            if (!others_equal) continue;
            const auto row = static_cast<Eigen::Index>(indices[r][i] * dims[j] + indices[r][j]);
            const auto col = static_cast<Eigen::Index>(indices[c][i] * dims[j] + indices[c][j]);
            big(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = u(row, col);
        }
    return big;
}

// Scratch directory removed when the guard goes out of scope.
class TempDir {
  public:
    explicit TempDir(const std::string &tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("sqt_" + tag + "_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    std::string file(const std::string &name) const { return (path_ / name).string(); }
    std::string write(const std::string &name, const std::string &text) const {
        std::ofstream(file(name)) << text;
        return file(name);
    }

  private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace oracle
