#include "growthlab/linalg.hpp"

#include "growthlab/error.hpp"

namespace growthlab::linalg {

Matrix identity(const Field& F, std::size_t n) {
    Matrix I(n, Vector(n, F.zero()));
    for (std::size_t i = 0; i < n; ++i) I[i][i] = F.one();
    return I;
}

Matrix multiply(const Field& F, const Matrix& A, const Matrix& B) {
    if (A.empty() || A[0].size() != B.size()) fail(ErrorCode::DimMismatch, "matrix shapes do not compose");
    Matrix C(A.size(), Vector(B[0].size(), F.zero()));
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t k = 0; k < B.size(); ++k) {
            if (F.is_zero(A[i][k])) continue;
            for (std::size_t j = 0; j < B[0].size(); ++j) C[i][j] = F.add(C[i][j], F.mul(A[i][k], B[k][j]));
        }
    return C;
}

Vector apply(const Field& F, const Matrix& M, const Vector& v) {
    Vector out(M.size(), F.zero());
    for (std::size_t i = 0; i < M.size(); ++i) {
        if (M[i].size() != v.size()) fail(ErrorCode::DimMismatch, "matrix and vector sizes differ");
        for (std::size_t j = 0; j < v.size(); ++j) out[i] = F.add(out[i], F.mul(M[i][j], v[j]));
    }
    return out;
}

Matrix transpose(const Matrix& M) {
    if (M.empty()) return {};
    Matrix T(M[0].size(), Vector(M.size()));
    for (std::size_t i = 0; i < M.size(); ++i)
        for (std::size_t j = 0; j < M[0].size(); ++j) T[j][i] = M[i][j];
    return T;
}

namespace {

// Row-reduces in place to echelon form; returns the rank and tracks the
// determinant factor for square input.
std::size_t eliminate(const Field& F, Matrix& M, Element* det) {
    const std::size_t rows = M.size(), cols = rows ? M[0].size() : 0;
    std::size_t r = 0;
    if (det) *det = F.one();
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && F.is_zero(M[piv][c])) ++piv;
        if (piv == rows) continue;
        if (piv != r) {
            std::swap(M[piv], M[r]);
            if (det) *det = F.neg(*det);
        }
        if (det) *det = F.mul(*det, M[r][c]);
        const Element inv = F.inv(M[r][c]);
        for (std::size_t j = c; j < cols; ++j) M[r][j] = F.mul(M[r][j], inv);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || F.is_zero(M[i][c])) continue;
            const Element f = M[i][c];
            for (std::size_t j = c; j < cols; ++j) M[i][j] = F.sub(M[i][j], F.mul(f, M[r][j]));
        }
        ++r;
    }
    return r;
}

}  // namespace

Element determinant(const Field& F, Matrix M) {
    if (M.empty() || M.size() != M[0].size()) fail(ErrorCode::DimMismatch, "determinant of a non-square matrix");
    Element det;
    return eliminate(F, M, &det) == M.size() ? det : F.zero();
}

std::size_t rank(const Field& F, Matrix rows) { return eliminate(F, rows, nullptr); }

std::optional<Matrix> inverse(const Field& F, const Matrix& M) {
    const std::size_t n = M.size();
    if (n == 0 || M[0].size() != n) fail(ErrorCode::DimMismatch, "inverse of a non-square matrix");
    Matrix aug(n, Vector(2 * n, F.zero()));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug[i][j] = M[i][j];
        aug[i][n + i] = F.one();
    }
    if (eliminate(F, aug, nullptr) < n || F.is_zero(aug[n - 1][n - 1])) return std::nullopt;
    Matrix out(n, Vector(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i][j] = aug[i][n + j];
    return out;
}

std::optional<Vector> solve(const Field& F, const Matrix& M, const Vector& b) {
    auto inv = inverse(F, M);
    if (!inv) return std::nullopt;
    return apply(F, *inv, b);
}

}  // namespace growthlab::linalg
