#pragma once

#include <any>
#include <cstdint>
#include <string>
#include <utility>

#include "coachsim/error.hpp"

namespace coachsim::runtime {

// Canonical text for payloads carried through ports. Every payload type
// provides a trace_text overload (found by ADL); the text is what appears in
// the determinism trace, so it must be produced by locale-independent,
// shortest-round-trip formatting.
std::string trace_text(double v);
std::string trace_text(std::int64_t v);
std::string trace_text(bool v);
std::string trace_text(const std::string& v);

// Type-erased port payload. The canonical text is fixed at construction so
// trace capture never re-serializes.
class Value {
 public:
  Value() = default;

  template <class T>
  explicit Value(T payload) : payload_(std::move(payload)) {
    using coachsim::runtime::trace_text;
    text_ = trace_text(*std::any_cast<T>(&payload_));
  }

  bool empty() const { return !payload_.has_value(); }
  const std::string& text() const { return text_; }

  template <class T>
  const T& as() const {
    const T* p = std::any_cast<T>(&payload_);
    if (p == nullptr) {
      throw FatalError("port payload type mismatch (value is '" + text_ + "')");
    }
    return *p;
  }

 private:
  std::any payload_;
  std::string text_;
};

}  // namespace coachsim::runtime
