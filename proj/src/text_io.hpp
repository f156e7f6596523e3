#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace patlake::detail {

/// Decimal u64; throws Format mentioning `what`.
std::uint64_t parse_u64(std::string_view s, std::string_view what);
std::string hex64(std::uint64_t v);
/// Exactly 16 hex digits; throws Format mentioning `what`.
std::uint64_t parse_hex64(std::string_view s, std::string_view what);

/// Throw Io on failure.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Line reader tracking line numbers.
class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}
    bool next(std::string_view& line);
    std::size_t line_number() const { return lineno_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t lineno_ = 0;
};

}  // namespace patlake::detail
