#pragma once

// Shared tokenizer for the one-line property and schema expressions.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "epicomp/error.hpp"
#include "epicomp/system.hpp"

namespace epicomp::detail {

class SurfaceLexer {
 public:
  explicit SurfaceLexer(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, 0, pos_ + 1); }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  bool accept(std::string_view token) {
    skip_ws();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  bool peek(std::string_view token) {
    skip_ws();
    return text_.substr(pos_, token.size()) == token;
  }

  /// [A-Za-z_][A-Za-z0-9_-]* ; hyphens allow keywords such as anon-upto.
  std::string name(bool allow_hyphen = false) {
    skip_ws();
    auto start_ok = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
    auto body_ok = [&](char c) {
      return start_ok(c) || (c >= '0' && c <= '9') || (allow_hyphen && c == '-' && pos_ + 1 < text_.size() &&
                                                       text_[pos_ + 1] != '>');
    };
    if (pos_ >= text_.size() || !start_ok(text_[pos_])) fail("expected name");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && body_ok(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::uint64_t number() {
    skip_ws();
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') v = v * 10 + (text_[pos_++] - '0');
    if (pos_ == start) fail("expected number");
    return v;
  }

  Action action() {
    Action a{name(), {}};
    if (accept("(")) {
      a.param = name();
      expect(")");
    }
    return a;
  }

  template <class F>
  void braced_list(F&& item) {
    expect("{");
    if (accept("}")) return;
    do {
      item();
    } while (accept(","));
    expect("}");
  }

  std::vector<std::string> name_set() {
    std::vector<std::string> out;
    braced_list([&] { out.push_back(name()); });
    return out;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace epicomp::detail
