#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace bmcap {

// Mixed-radix codec for length-n tuples over {0..radix-1}. Position 1 of the
// tuple (array index 0) is the most significant digit; this ordering is part
// of the file format contract and must not change.

inline std::size_t tuple_count(std::size_t radix, int len) {
  std::size_t n = 1;
  for (int i = 0; i < len; ++i) {
    if (radix != 0 && n > static_cast<std::size_t>(-1) / radix)
      throw std::overflow_error("tuple_count overflow");
    n *= radix;
  }
  return n;
}

inline std::size_t tuple_to_index(std::span<const int> tuple,
                                  std::size_t radix) {
  std::size_t idx = 0;
  for (int sym : tuple) {
    if (sym < 0 || static_cast<std::size_t>(sym) >= radix)
      throw std::out_of_range("tuple symbol out of alphabet range");
    idx = idx * radix + static_cast<std::size_t>(sym);
  }
  return idx;
}

inline void index_to_tuple(std::size_t index, std::size_t radix,
                           std::span<int> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<int>(index % radix);
    index /= radix;
  }
}

inline std::vector<int> index_to_tuple(std::size_t index, std::size_t radix,
                                       int len) {
  std::vector<int> t(static_cast<std::size_t>(len));
  index_to_tuple(index, radix, std::span<int>(t));
  return t;
}

}  // namespace bmcap
