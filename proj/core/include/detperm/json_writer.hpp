#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace detperm {

/// Shortest %.17g rendering of a double. Non-finite values (the log-domain
/// -infinity sentinel in particular) render as "null" so reports stay valid
/// JSON.
std::string format_double(double v);

/// Streaming JSON writer that keeps keys in insertion order, so a report is
/// byte-identical whenever the same values are written in the same order.
/// Objects are pretty-printed with two-space indents; arrays (and anything
/// nested inside them) are emitted on a single line.
class JsonWriter {
 public:
  explicit JsonWriter(std::ostream& out);

  void begin_object();
  void end_object();
  void begin_array();
  void end_array();

  void key(std::string_view name);

  void value(double v);
  void value(std::int64_t v);
  void value(std::uint64_t v);
  void value(int v);
  void value(bool v);
  void value(std::string_view v);
  void value(const char* v);
  void null();

  /// Convenience: key followed by value.
  template <typename T>
  void field(std::string_view name, T v) {
    key(name);
    value(v);
  }
  void field_null(std::string_view name) {
    key(name);
    null();
  }

  /// Call once after the root value closes; emits the trailing newline.
  void finish();

 private:
  struct Frame {
    bool is_array;
    bool has_items;
  };

  void before_item();
  void indent();
  bool inline_mode() const;

  std::ostream& out_;
  std::vector<Frame> stack_;
  bool pending_key_ = false;
};

}  // namespace detperm
