#ifndef MHD_CSV_HPP
#define MHD_CSV_HPP

#include <string>
#include <vector>

namespace mhd {

// 17 significant digits, '.' decimal point, shortest reproducible form
std::string fmt_g17(double x);

// RFC-4180 quoting: wrap in double quotes when the cell contains a comma,
// quote, or line break, doubling embedded quotes
std::string csv_escape(const std::string& cell);

// one CRLF-terminated record
std::string csv_row(const std::vector<std::string>& cells);

// write a whole file; parent directory must exist
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace mhd

#endif
