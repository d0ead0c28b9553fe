#pragma once

#include <optional>
#include <vector>

#include "growthlab/field.hpp"

// Dense linear algebra over any Field, by Gaussian elimination.
namespace growthlab::linalg {

using Vector = std::vector<Element>;
using Matrix = std::vector<Vector>;  // row-major

Matrix identity(const Field& F, std::size_t n);
Matrix multiply(const Field& F, const Matrix& A, const Matrix& B);
Vector apply(const Field& F, const Matrix& M, const Vector& v);
Matrix transpose(const Matrix& M);
Element determinant(const Field& F, Matrix M);
std::size_t rank(const Field& F, Matrix rows);
std::optional<Matrix> inverse(const Field& F, const Matrix& M);
// The unique x with Mx = b for square invertible M.
std::optional<Vector> solve(const Field& F, const Matrix& M, const Vector& b);

}  // namespace growthlab::linalg
