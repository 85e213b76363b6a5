#pragma once

#include <Eigen/Dense>

#include "qcemu/statevector.hpp"

namespace qcemu {

using DenseMatrix = Eigen::MatrixXcd;

/// Dense 2^n x 2^n operator, column i being the image of basis state i.
struct DenseUnitary {
    unsigned n = 0;
    DenseMatrix matrix;

    Index dim() const noexcept { return Index{1} << n; }

    /// max |U^dagger U - I|
    double unitarity_error() const;

    /// U * state, as a new StateVector.
    StateVector apply(const StateVector& state) const;
};

/// Largest register to_dense_matrix builds by default (2^28 entries, about 4 GiB).
inline constexpr unsigned kDefaultDenseLimit = 14;

}  // namespace qcemu
