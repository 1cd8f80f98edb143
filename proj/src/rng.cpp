#include "repsurf/rng.hpp"

#include <cmath>

namespace repsurf {

double RngStream::normal(double stdev) {
    // Box-Muller; 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - next_double();
    const double u2 = next_double();
    return stdev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

bool rng_bernoulli(RngStream& stream, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        raise(ErrorCode::invalid_argument, "bernoulli probability must lie in [0, 1]");
    }
    return stream.next_double() < p;
}

}  // namespace repsurf
