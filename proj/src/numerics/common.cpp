#include "hgks/common.hpp"

namespace hgks {

std::string to_string(const CellIndex& c) {
  return "(" + std::to_string(c.i) + ", " + std::to_string(c.j) + ", " + std::to_string(c.k) + ")";
}

InvalidStateError::InvalidStateError(const std::string& what, CellIndex where)
    : std::runtime_error(where.i >= 0 ? what + " at cell " + to_string(where) : what), where_(where) {}

}  // namespace hgks
