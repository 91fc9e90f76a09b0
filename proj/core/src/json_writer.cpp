#include "detperm/json_writer.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace detperm {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

JsonWriter::JsonWriter(std::ostream& out) : out_(out) {}

bool JsonWriter::inline_mode() const {
  for (const Frame& f : stack_) {
    if (f.is_array) return true;
  }
  return false;
}

void JsonWriter::indent() {
  out_ << '\n';
  for (std::size_t i = 0; i < stack_.size(); ++i) out_ << "  ";
}

void JsonWriter::before_item() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (stack_.empty()) return;
  Frame& top = stack_.back();
  if (top.has_items) out_ << (inline_mode() ? ", " : ",");
  top.has_items = true;
  if (!inline_mode()) indent();
}

void JsonWriter::begin_object() {
  before_item();
  out_ << '{';
  stack_.push_back({false, false});
}

void JsonWriter::end_object() {
  bool had_items = stack_.back().has_items;
  bool was_inline = inline_mode();
  stack_.pop_back();
  if (had_items && !was_inline) indent();
  out_ << '}';
}

void JsonWriter::begin_array() {
  before_item();
  out_ << '[';
  stack_.push_back({true, false});
}

void JsonWriter::end_array() {
  stack_.pop_back();
  out_ << ']';
}

void JsonWriter::key(std::string_view name) {
  before_item();
  out_ << '"';
  for (char c : name) out_ << c;  // keys are plain identifiers here
  out_ << "\": ";
  pending_key_ = true;
}

void JsonWriter::value(double v) {
  before_item();
  out_ << format_double(v);
}

void JsonWriter::value(std::int64_t v) {
  before_item();
  out_ << v;
}

void JsonWriter::value(std::uint64_t v) {
  before_item();
  out_ << v;
}

void JsonWriter::value(int v) {
  before_item();
  out_ << v;
}

void JsonWriter::value(bool v) {
  before_item();
  out_ << (v ? "true" : "false");
}

void JsonWriter::value(std::string_view v) {
  before_item();
  out_ << '"';
  for (char c : v) {
    switch (c) {
      case '"':
        out_ << "\\\"";
        break;
      case '\\':
        out_ << "\\\\";
        break;
      case '\n':
        out_ << "\\n";
        break;
      case '\t':
        out_ << "\\t";
        break;
      case '\r':
        out_ << "\\r";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out_ << buf;
        } else {
          out_ << c;
        }
    }
  }
  out_ << '"';
}

void JsonWriter::value(const char* v) { value(std::string_view(v)); }

void JsonWriter::null() {
  before_item();
  out_ << "null";
}

void JsonWriter::finish() { out_ << '\n'; }

}  // namespace detperm
