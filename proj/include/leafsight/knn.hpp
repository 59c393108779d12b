#ifndef LEAFSIGHT_KNN_HPP
#define LEAFSIGHT_KNN_HPP

#include "leafsight/dataset.hpp"

namespace leafsight {

// Euclidean k-nearest-neighbor majority vote. Distance ties break to the
// earlier training row; vote ties to the smaller mean neighbor distance,
// then to class order.
int knn_predict(const Dataset& train, const VecX& x, int k);

}  // namespace leafsight

#endif
