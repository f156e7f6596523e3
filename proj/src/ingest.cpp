#include "patlake/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "patlake/error.hpp"

namespace fs = std::filesystem;

namespace patlake {

namespace {

void warn(std::vector<std::string>* warnings, std::string msg) {
    if (warnings) warnings->push_back(std::move(msg));
}

std::string read_all(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::Io, "error reading " + path.string());
    return ss.str();
}

using Record = std::vector<std::string>;

// RFC-4180 records. Returns false on an unterminated quoted field.
bool parse_csv(const std::string& text, std::vector<std::pair<std::size_t, Record>>& records) {
    std::size_t i = 0, line = 1;
    while (i < text.size()) {
        std::size_t start_line = line;
        Record rec;
        std::string field;
        bool quoted_field = false;
        bool end_of_record = false;
        // Blank line: skip.
        if (text[i] == '\n' || (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n')) {
            i += text[i] == '\r' ? 2 : 1;
            ++line;
            continue;
        }
        while (!end_of_record) {
            if (i >= text.size()) {
                rec.push_back(std::move(field));
                break;
            }
            char c = text[i];
            if (c == '"' && field.empty() && !quoted_field) {
                quoted_field = true;
                ++i;
                bool closed = false;
                while (i < text.size()) {
                    if (text[i] == '"') {
                        if (i + 1 < text.size() && text[i + 1] == '"') {
                            field += '"';
                            i += 2;
                        } else {
                            ++i;
                            closed = true;
                            break;
                        }
                    } else {
                        if (text[i] == '\n') ++line;
                        field += text[i++];
                    }
                }
                if (!closed) return false;
            } else if (c == ',') {
                rec.push_back(std::move(field));
                field.clear();
                quoted_field = false;
                ++i;
            } else if (c == '\n' || (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n')) {
                rec.push_back(std::move(field));
                i += c == '\r' ? 2 : 1;
                ++line;
                end_of_record = true;
            } else {
                field += c;
                ++i;
            }
        }
        records.emplace_back(start_line, std::move(rec));
    }
    return true;
}

void parse_tsv(const std::string& text, std::vector<std::pair<std::size_t, Record>>& records) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        Record rec;
        std::size_t start = 0;
        while (true) {
            auto tab = line.find('\t', start);
            rec.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        records.emplace_back(lineno, std::move(rec));
    }
}

std::vector<Column> tabular_columns(const fs::path& path, std::vector<std::pair<std::size_t, Record>> records,
                                    bool has_header, std::size_t sample_rows, std::vector<std::string>* warnings) {
    std::vector<Column> cols;
    if (records.empty()) return cols;
    const std::size_t width = records.front().second.size();
    cols.resize(width);
    for (std::size_t c = 0; c < width; ++c) {
        cols[c].source = path;
        cols[c].index = c;
    }
    std::size_t first = 0;
    if (has_header) {
        for (std::size_t c = 0; c < width; ++c) cols[c].name = records.front().second[c];
        first = 1;
    }
    std::size_t rows = 0;
    for (std::size_t r = first; r < records.size() && rows < sample_rows; ++r) {
        auto& [line, rec] = records[r];
        if (rec.size() != width) {
            warn(warnings, "FormatError: " + path.string() + ":" + std::to_string(line) + ": expected " +
                               std::to_string(width) + " fields, found " + std::to_string(rec.size()) +
                               "; row skipped");
            continue;
        }
        for (std::size_t c = 0; c < width; ++c) cols[c].values.push_back(std::move(rec[c]));
        ++rows;
    }
    std::erase_if(cols, [](const Column& c) { return c.values.empty(); });
    return cols;
}

std::vector<Column> jsonl_columns(const fs::path& path, const std::string& text, std::size_t sample_rows,
                                  std::vector<std::string>* warnings) {
    std::map<std::string, std::vector<std::string>> by_key;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0, rows = 0;
    while (rows < sample_rows && std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            warn(warnings, "FormatError: " + path.string() + ":" + std::to_string(lineno) +
                               ": not a JSON object; row skipped");
            continue;
        }
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            const auto& v = it.value();
            if (v.is_string()) by_key[it.key()].push_back(v.get<std::string>());
            else if (v.is_number() || v.is_boolean()) by_key[it.key()].push_back(v.dump());
        }
        ++rows;
    }
    std::vector<Column> cols;
    std::size_t ordinal = 0;
    for (auto& [key, values] : by_key) {
        Column c;
        c.values = std::move(values);
        c.source = path;
        c.index = ordinal++;
        c.name = key;
        cols.push_back(std::move(c));
    }
    return cols;
}

}  // namespace

std::optional<FileFormat> format_for(const fs::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return char(std::tolower(c)); });
    if (ext == ".csv") return FileFormat::Csv;
    if (ext == ".tsv") return FileFormat::Tsv;
    if (ext == ".jsonl") return FileFormat::JsonLines;
    return std::nullopt;
}

std::vector<fs::path> corpus_files(const CorpusSpec& spec, std::vector<std::string>* warnings) {
    std::vector<fs::path> files;
    auto accept = [&](const fs::path& p) {
        auto fmt = format_for(p);
        if (fmt && std::find(spec.formats.begin(), spec.formats.end(), *fmt) != spec.formats.end())
            files.push_back(p);
    };
    for (const auto& root : spec.roots) {
        std::error_code ec;
        if (fs::is_directory(root, ec)) {
            for (auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied, ec);
                 !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
                if (it->is_regular_file(ec)) accept(it->path());
            }
            if (ec) warn(warnings, "IoError: " + root.string() + ": " + ec.message());
        } else if (fs::exists(root, ec)) {
            accept(root);
        } else {
            warn(warnings, "IoError: " + root.string() + ": no such file or directory");
        }
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });
    files.erase(std::unique(files.begin(), files.end()), files.end());
    return files;
}

std::vector<Column> load_file(const fs::path& path, FileFormat format, bool has_header, std::size_t sample_rows,
                              std::vector<std::string>* warnings) {
    if (sample_rows == 0) throw Error(ErrorCode::InvalidArgument, "sample_rows must be at least 1");
    std::string text = read_all(path);
    switch (format) {
        case FileFormat::Csv: {
            std::vector<std::pair<std::size_t, Record>> records;
            if (!parse_csv(text, records))
                warn(warnings, "FormatError: " + path.string() + ": unterminated quoted field; trailing row skipped");
            return tabular_columns(path, std::move(records), has_header, sample_rows, warnings);
        }
        case FileFormat::Tsv: {
            std::vector<std::pair<std::size_t, Record>> records;
            parse_tsv(text, records);
            return tabular_columns(path, std::move(records), has_header, sample_rows, warnings);
        }
        case FileFormat::JsonLines:
            return jsonl_columns(path, text, sample_rows, warnings);
    }
    return {};
}

void for_each_column(const CorpusSpec& spec, const std::function<void(Column&&)>& visit,
                     std::vector<std::string>* warnings) {
    if (spec.sample_rows == 0) throw Error(ErrorCode::InvalidArgument, "sample_rows must be at least 1");
    for (const auto& file : corpus_files(spec, warnings)) {
        const FileFormat fmt = *format_for(file);
        const bool header = fmt == FileFormat::Csv ? spec.csv_header : spec.tsv_header;
        std::vector<Column> cols;
        try {
            cols = load_file(file, fmt, header, spec.sample_rows, warnings);
        } catch (const Error& e) {
            warn(warnings, std::string(to_string(e.code())) + ": " + e.what() + "; file skipped");
            continue;
        }
        for (auto& c : cols) visit(std::move(c));
    }
}

std::vector<Column> load_corpus(const CorpusSpec& spec, std::vector<std::string>* warnings) {
    std::vector<Column> out;
    for_each_column(spec, [&](Column&& c) { out.push_back(std::move(c)); }, warnings);
    return out;
}

Column load_query_column(const fs::path& path, std::size_t ordinal, std::size_t sample_rows, bool has_header,
                         std::vector<std::string>* warnings) {
    auto fmt = format_for(path);
    if (!fmt) throw Error(ErrorCode::Format, "unsupported file type: " + path.string());
    auto cols = load_file(path, *fmt, has_header, sample_rows, warnings);
    for (auto& c : cols)
        if (c.index == ordinal) return std::move(c);
    throw Error(ErrorCode::ColumnNotFound,
                "column " + std::to_string(ordinal) + " not found in " + path.string());
}

}  // namespace patlake
