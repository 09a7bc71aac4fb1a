// SPDX-License-Identifier: Apache-2.0
//
// irsbeam - robust transmit power minimization for IRS-assisted MISO downlinks
// Copyright (C) 2026 the irsbeam authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.
// ------------------------------------------------------------------------------------------------

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

namespace irsbeam
{

using cxd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Tolerance for accepting a numerically Hermitian input (relative to the largest entry).
constexpr double kHermitianTol = 1e-12;

// Column-major stacking of a matrix into a vector.
inline CVec vec(const CMat &A)
{
    return Eigen::Map<const CVec>(A.data(), A.size());
}

// Inverse of vec: reshape a stacked vector back into a rows-by-cols matrix.
inline CMat unvec(const CVec &v, Eigen::Index rows, Eigen::Index cols)
{
    if (v.size() != rows * cols)
        throw std::invalid_argument("unvec: size mismatch");
    return Eigen::Map<const CMat>(v.data(), rows, cols);
}

// Kronecker product A (x) B.
inline CMat kron(const CMat &A, const CMat &B)
{
    CMat K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

// Largest absolute deviation from Hermitian symmetry, relative to max(1, largest entry).
inline double hermitian_deviation(const CMat &A)
{
    if (A.rows() != A.cols())
        throw std::invalid_argument("hermitian_deviation: matrix must be square");
    double dev = (A - A.adjoint()).cwiseAbs().maxCoeff();
    double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    return dev / scale;
}

// Return the Hermitian part (A + A^H)/2 after checking A is within tol of Hermitian.
inline CMat require_hermitian(const CMat &A, double tol = kHermitianTol)
{
    if (hermitian_deviation(A) > tol)
        throw std::invalid_argument("require_hermitian: input is not Hermitian within tolerance");
    return 0.5 * (A + A.adjoint());
}

// Map a complex Hermitian matrix H onto the real symmetric form
//   [ Re(H)  -Im(H) ]
//   [ Im(H)   Re(H) ]
// which is PSD iff H is, with every eigenvalue of H appearing twice.
inline RMat realify(const CMat &H, double tol = kHermitianTol)
{
    CMat Hs = require_hermitian(H, tol);
    const Eigen::Index n = Hs.rows();
    RMat S(2 * n, 2 * n);
    S.topLeftCorner(n, n) = Hs.real();
    S.bottomRightCorner(n, n) = Hs.real();
    S.topRightCorner(n, n) = -Hs.imag();
    S.bottomLeftCorner(n, n) = Hs.imag();
    return S;
}

// Smallest eigenvalue of a complex Hermitian matrix.
inline double min_eig(const CMat &H, double tol = kHermitianTol)
{
    CMat Hs = require_hermitian(H, tol);
    if (Hs.rows() == 0)
        throw std::invalid_argument("min_eig: empty matrix");
    if (Hs.rows() == 1)
        return Hs(0, 0).real();
    Eigen::SelfAdjointEigenSolver<CMat> es(Hs, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// Smallest eigenvalue of a real symmetric matrix.
inline double min_eig(const RMat &S, double tol = kHermitianTol)
{
    if (S.rows() != S.cols())
        throw std::invalid_argument("min_eig: matrix must be square");
    double dev = (S - S.transpose()).cwiseAbs().maxCoeff() / std::max(1.0, S.cwiseAbs().maxCoeff());
    if (dev > tol)
        throw std::invalid_argument("min_eig: input is not symmetric within tolerance");
    if (S.rows() == 0)
        throw std::invalid_argument("min_eig: empty matrix");
    if (S.rows() == 1)
        return S(0, 0);
    RMat Ss = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<RMat> es(Ss, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// ------------------------------------------------------------------------------------------------
// Real parametrization of Hermitian matrices.
//
// An M-by-M Hermitian matrix has M^2 real degrees of freedom.  The layout used throughout is:
//   index 0..M-1          : diagonal entries W(p,p)
//   then for each p < q   : Re W(p,q), Im W(p,q) (column-major over pairs: q outer, p inner)
// ------------------------------------------------------------------------------------------------

inline Eigen::Index hermitian_param_count(Eigen::Index M)
{
    return M * M;
}

// Basis matrix for parameter k under the layout above (unit coefficient).
inline CMat hermitian_basis(Eigen::Index M, Eigen::Index k)
{
    CMat B = CMat::Zero(M, M);
    if (k < M)
    {
        B(k, k) = 1.0;
        return B;
    }
    Eigen::Index idx = (k - M) / 2;      // which off-diagonal pair
    bool imag_part = ((k - M) % 2) != 0; // even -> real part, odd -> imaginary part
    Eigen::Index count = 0;
    for (Eigen::Index q = 1; q < M; ++q)
        for (Eigen::Index p = 0; p < q; ++p, ++count)
            if (count == idx)
            {
                if (imag_part)
                {
                    B(p, q) = cxd(0.0, 1.0);
                    B(q, p) = cxd(0.0, -1.0);
                }
                else
                {
                    B(p, q) = 1.0;
                    B(q, p) = 1.0;
                }
                return B;
            }
    throw std::invalid_argument("hermitian_basis: index out of range");
}

// Assemble a Hermitian matrix from its real parameter vector.
inline CMat hermitian_from_params(const RVec &x, Eigen::Index M)
{
    if (x.size() != M * M)
        throw std::invalid_argument("hermitian_from_params: parameter count mismatch");
    CMat W = CMat::Zero(M, M);
    for (Eigen::Index p = 0; p < M; ++p)
        W(p, p) = x(p);
    Eigen::Index k = M;
    for (Eigen::Index q = 1; q < M; ++q)
        for (Eigen::Index p = 0; p < q; ++p)
        {
            W(p, q) = cxd(x(k), x(k + 1));
            W(q, p) = std::conj(W(p, q));
            k += 2;
        }
    return W;
}

// Extract the real parameter vector of a Hermitian matrix (inverse of hermitian_from_params).
inline RVec hermitian_to_params(const CMat &W, double tol = kHermitianTol)
{
    CMat Ws = require_hermitian(W, tol);
    const Eigen::Index M = Ws.rows();
    RVec x(M * M);
    for (Eigen::Index p = 0; p < M; ++p)
        x(p) = Ws(p, p).real();
    Eigen::Index k = M;
    for (Eigen::Index q = 1; q < M; ++q)
        for (Eigen::Index p = 0; p < q; ++p)
        {
            x(k) = Ws(p, q).real();
            x(k + 1) = Ws(p, q).imag();
            k += 2;
        }
    return x;
}

} // namespace irsbeam
