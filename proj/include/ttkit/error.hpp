#pragma once

#include <stdexcept>
#include <string>

namespace ttkit {

/** Bad user-supplied data: unknown labels, malformed files, broken invariants. */
struct input_error : std::runtime_error {
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

/** A documented operation precondition does not hold for the given value. */
struct precondition_error : std::runtime_error {
  explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

/** A cross-check that cannot fail on valid inputs failed; the value is corrupt
 *  or there is a bug. Surfaced loudly instead of being papered over. */
struct internal_error : std::logic_error {
  explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

} // namespace ttkit
