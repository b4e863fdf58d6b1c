#include "fedsim/tensor.hpp"

#include <cmath>
#include <string>

namespace fedsim {

bool Tensor4::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

void Tensor4::require_finite(const char* what) const {
    if (!all_finite()) throw NumericError(std::string("non-finite value in ") + what);
}

}  // namespace fedsim
