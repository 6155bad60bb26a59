#pragma once

#include <stdexcept>
#include <string>

namespace ndual {

// Every library failure derives from Error so callers (notably the CLI) can
// map them onto exit codes with a single catch.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define NDUAL_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                      \
   public:                                                         \
    using Error::Error;                                            \
    const char* kind() const noexcept override { return #Name; }   \
  };

NDUAL_DEFINE_ERROR(DimensionError)
NDUAL_DEFINE_ERROR(RangeError)
NDUAL_DEFINE_ERROR(ValueError)
NDUAL_DEFINE_ERROR(ZeroVectorError)
NDUAL_DEFINE_ERROR(ShapeError)
NDUAL_DEFINE_ERROR(RankError)
NDUAL_DEFINE_ERROR(DependentFamilyError)
NDUAL_DEFINE_ERROR(UnsupportedSizeError)
NDUAL_DEFINE_ERROR(UnsupportedError)
NDUAL_DEFINE_ERROR(NotAntisymmetricError)
NDUAL_DEFINE_ERROR(ConfigError)

#undef NDUAL_DEFINE_ERROR

}  // namespace ndual
