#include "focinet/parallel.hpp"

namespace focinet {

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace focinet
