#pragma once

#include <stdexcept>
#include <string>

namespace permod {

// Every precondition or domain failure raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace permod
