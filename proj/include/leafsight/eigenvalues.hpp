#ifndef LEAFSIGHT_EIGENVALUES_HPP
#define LEAFSIGHT_EIGENVALUES_HPP

#include <vector>

#include "leafsight/core.hpp"

namespace leafsight {

// Real eigenvalues of a small dense matrix with a real spectrum, computed
// by Householder reduction to Hessenberg form followed by shifted QR
// iteration with deflation (tolerance 1e-10, 500-sweep cap). Returned in
// descending order. Complex pairs (which the matrices fed here, being
// similar to symmetric ones, do not produce) contribute their real parts.
std::vector<Scalar> real_eigenvalues_qr(MatX a, Scalar tol = 1e-10,
                                        int max_sweeps = 500);

}  // namespace leafsight

#endif
