#pragma once

#include <any>
#include <string>
#include <typeindex>
#include <type_traits>
#include <utility>

#include "thermo/errors.hpp"

namespace thermo {

// Heterogeneous value box with a checked projection. The tag is the static
// type of the embedded value, so two embeds of the same type carry the same
// tag no matter how many times the surrounding computation is replayed.
class UniversalValue {
 public:
  UniversalValue() = default;

  bool has_value() const { return payload_.has_value(); }

  std::type_index type_tag() const {
    return std::type_index(payload_.type());  // typeid(void) when empty
  }

  template <class T>
  friend UniversalValue embed(T value);
  template <class T>
  friend T project(const UniversalValue& u);

 private:
  std::any payload_;
};

template <class T>
UniversalValue embed(T value) {
  static_assert(!std::is_reference_v<T>);
  UniversalValue u;
  u.payload_ = std::move(value);
  return u;
}

template <class T>
T project(const UniversalValue& u) {
  if (!u.payload_.has_value())
    throw type_mismatch("project: empty universal value");
  if (std::type_index(u.payload_.type()) != std::type_index(typeid(T)))
    throw type_mismatch(std::string("project: value embedded as ") +
                        u.payload_.type().name() + ", requested " +
                        typeid(T).name());
  return std::any_cast<T>(u.payload_);
}

}  // namespace thermo
