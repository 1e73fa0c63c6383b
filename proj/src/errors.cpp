#include "qss/errors.hpp"

#include <cmath>
#include <sstream>

namespace qss {

void require_in_range(const char* name, double value, double lo, double hi) {
  if (!(value >= lo && value <= hi)) {
    std::ostringstream os;
    os << name << " = " << value << " outside [" << lo << ", " << hi << "]";
    throw DomainError(os.str());
  }
}

}  // namespace qss
