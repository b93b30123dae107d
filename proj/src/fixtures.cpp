#include "cproots/fixtures.hpp"

namespace cproots::fixtures {

CMap swap_diagonal_map() {
    return CMap::from_kraus({matrix_unit(2, 0, 1), matrix_unit(2, 1, 0)});
}

CMap diagonal_restriction_map() {
    return CMap::from_kraus({matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)});
}

// Mixture of the identity and sigma_z conjugation.
CMap offdiag_scaling_map(double s) {
    CMatrix z = CMatrix::Identity(2, 2);
    z(1, 1) = -1.0;
    return CMap::from_kraus({std::sqrt((1.0 + s) / 2.0) * CMatrix::Identity(2, 2), std::sqrt((1.0 - s) / 2.0) * z});
}

CMap swap_offdiag_scaling_map(double s) {
    CMatrix x = CMatrix::Zero(2, 2);
    x(0, 1) = x(1, 0) = 1.0;
    CMatrix z = CMatrix::Identity(2, 2);
    z(1, 1) = -1.0;
    // sigma_x (scaled x) sigma_x, Kraus L = K sigma_x
    return CMap::from_kraus({std::sqrt((1.0 + s) / 2.0) * x, std::sqrt((1.0 - s) / 2.0) * z * x});
}

CMap corner_pinching_map() {
    CMatrix q = CMatrix::Zero(3, 3);
    q(1, 1) = q(2, 2) = 1.0;
    return CMap::from_kraus({matrix_unit(3, 0, 0), q});
}

CMap transpose_map(int d) {
    CMatrix s = CMatrix::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) s(j + i * d, i + j * d) = 1.0;
    return CMap::from_superop(s);
}

}  // namespace cproots::fixtures
