#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace drivesent::csv {

using Record = std::vector<std::string>;

// RFC 4180 reader: comma separated, '"' quoting with "" escapes, fields may
// span lines. Accepts LF or CRLF record terminators. A UTF-8 BOM at the very
// start of the stream is skipped.
class Reader {
 public:
  explicit Reader(std::istream& in);

  // Reads the next record. Returns false at end of input.
  bool next(Record& out);

  // 1-based physical line on which the last returned record started.
  std::size_t line() const noexcept { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
  bool first_ = true;
};

std::string quote(std::string_view field);
void write_record(std::ostream& out, const Record& record);

}  // namespace drivesent::csv
