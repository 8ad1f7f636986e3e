#pragma once

#include <stdexcept>
#include <string>

namespace gearquest {

// A document does not match its documented JSON schema. The message names
// the source and the JSON path of the offending field.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gearquest
