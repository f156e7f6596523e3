#include "text_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "patlake/error.hpp"

namespace patlake::detail {

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw Error(ErrorCode::Format, std::string(what) + ": bad number '" + std::string(s) + "'");
    return v;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 0; i < 16; ++i) s[i] = digits[(v >> (60 - 4 * i)) & 15];
    return s;
}

std::uint64_t parse_hex64(std::string_view s, std::string_view what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
    if (s.size() != 16 || ec != std::errc() || ptr != s.data() + s.size())
        throw Error(ErrorCode::Format, std::string(what) + ": bad fingerprint '" + std::string(s) + "'");
    return v;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "error writing " + path.string());
}

bool LineReader::next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    auto nl = text_.find('\n', pos_);
    line = text_.substr(pos_, nl == std::string_view::npos ? std::string_view::npos : nl - pos_);
    pos_ = nl == std::string_view::npos ? text_.size() : nl + 1;
    ++lineno_;
    return true;
}

}  // namespace patlake::detail
