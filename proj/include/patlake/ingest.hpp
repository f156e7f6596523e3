#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace patlake {

enum class FileFormat { Csv, Tsv, JsonLines };

/// An ordered multiset of values taken from one column of one file.
struct Column {
    std::vector<std::string> values;
    std::filesystem::path source;
    std::size_t index = 0;
    std::optional<std::string> name;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
};

inline Column make_column(std::vector<std::string> values) {
    Column c;
    c.values = std::move(values);
    return c;
}

struct CorpusSpec {
    std::vector<std::filesystem::path> roots;
    std::vector<FileFormat> formats{FileFormat::Csv, FileFormat::Tsv, FileFormat::JsonLines};
    std::size_t sample_rows = 1000;
    bool csv_header = true;
    bool tsv_header = true;
};

/// Format implied by the file extension (.csv, .tsv, .jsonl).
std::optional<FileFormat> format_for(const std::filesystem::path& path);

/// Files under the roots with an accepted extension, sorted by path.
std::vector<std::filesystem::path> corpus_files(const CorpusSpec& spec, std::vector<std::string>* warnings = nullptr);

/// Columns of one file, each truncated to `sample_rows` values. Ragged or
/// malformed rows are skipped with a warning. Throws IoError if unreadable.
std::vector<Column> load_file(const std::filesystem::path& path, FileFormat format, bool has_header,
                              std::size_t sample_rows, std::vector<std::string>* warnings = nullptr);

/// Streams every column of the corpus in (path, ordinal) order. Unreadable
/// files are skipped with a warning.
void for_each_column(const CorpusSpec& spec, const std::function<void(Column&&)>& visit,
                     std::vector<std::string>* warnings = nullptr);

std::vector<Column> load_corpus(const CorpusSpec& spec, std::vector<std::string>* warnings = nullptr);

/// One column of one file. Throws ColumnNotFound when `ordinal` is out of range.
Column load_query_column(const std::filesystem::path& path, std::size_t ordinal, std::size_t sample_rows,
                         bool has_header = true, std::vector<std::string>* warnings = nullptr);

}  // namespace patlake
