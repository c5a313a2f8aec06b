// Copyright 2026 The kbtriage Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kbtriage/time.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>

#include "kbtriage/error.hpp"

namespace kbtriage {
namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  int digits(std::size_t count) {
    if (pos_ + count > text_.size()) malformed();
    int value = 0;
    for (std::size_t i = 0; i < count; ++i) {
      const char c = text_[pos_ + i];
      if (!std::isdigit(static_cast<unsigned char>(c))) malformed();
      value = value * 10 + (c - '0');
    }
    pos_ += count;
    return value;
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) malformed();
    ++pos_;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool done() const { return pos_ == text_.size(); }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  [[noreturn]] void malformed() const {
    fail(Errc::kMalformedTimestamp, std::string(text_));
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Timestamp make_timestamp(int year, unsigned month, unsigned day, int hour,
                         int minute, int second) {
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                           std::chrono::day{day}};
  if (!ymd.ok()) {
    fail(Errc::kMalformedTimestamp,
         fmt::format("{:04}-{:02}-{:02}", year, month, day));
  }
  return sys_days{ymd} + hours{hour} + minutes{minute} + seconds{second};
}

Timestamp parse_timestamp(std::string_view raw) {
  const std::string_view text = trim(raw);
  Cursor cur(text);
  const int year = cur.digits(4);
  cur.expect('-');
  const int month = cur.digits(2);
  cur.expect('-');
  const int day = cur.digits(2);
  if (cur.done()) return make_timestamp(year, month, day);

  if (!cur.accept('T') && !cur.accept('t') && !cur.accept(' ')) cur.malformed();
  const int hour = cur.digits(2);
  cur.expect(':');
  const int minute = cur.digits(2);
  int second = 0;
  if (cur.accept(':')) {
    second = cur.digits(2);
    if (cur.accept('.')) {
      if (!std::isdigit(static_cast<unsigned char>(cur.peek()))) cur.malformed();
      while (std::isdigit(static_cast<unsigned char>(cur.peek()))) cur.digits(1);
    }
  }
  if (hour > 23 || minute > 59 || second > 60) cur.malformed();

  std::chrono::seconds offset{0};
  if (cur.accept('Z') || cur.accept('z')) {
  } else if (cur.peek() == '+' || cur.peek() == '-') {
    const bool negative = cur.peek() == '-';
    cur.accept(cur.peek());
    const int oh = cur.digits(2);
    cur.accept(':');
    const int om = cur.digits(2);
    offset = std::chrono::hours{oh} + std::chrono::minutes{om};
    if (negative) offset = -offset;
  } else if (!cur.done()) {
    cur.malformed();
  }
  if (!cur.done()) cur.malformed();
  return make_timestamp(year, month, day, hour, minute, second) - offset;
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const auto day_point = floor<days>(ts);
  const year_month_day ymd{day_point};
  const hh_mm_ss<seconds> tod{ts - day_point};
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z",
                     static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()),
                     static_cast<unsigned>(ymd.day()), tod.hours().count(),
                     tod.minutes().count(), tod.seconds().count());
}

Timestamp parse_date(std::string_view raw) {
  const std::string_view text = trim(raw);
  Cursor cur(text);
  const int year = cur.digits(4);
  cur.expect('-');
  const int month = cur.digits(2);
  cur.expect('-');
  const int day = cur.digits(2);
  if (!cur.done()) cur.malformed();
  return make_timestamp(year, month, day);
}

std::string format_date(Timestamp ts) {
  using namespace std::chrono;
  const year_month_day ymd{floor<days>(ts)};
  return fmt::format("{:04}-{:02}-{:02}", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()),
                     static_cast<unsigned>(ymd.day()));
}

}  // namespace kbtriage
