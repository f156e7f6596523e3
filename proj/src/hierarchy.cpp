#include "patlake/hierarchy.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "patlake/error.hpp"

namespace patlake {

namespace {

constexpr std::string_view kStandardDefinition =
    "any - *\n"
    "alnum any 30-39,41-5a,61-7a\n"
    "letter alnum 41-5a,61-7a\n"
    "upper letter 41-5a\n"
    "lower letter 61-7a\n"
    "num alnum 30-39\n"
    "digit num 30-39\n"
    "hex alnum 30-39,41-46,61-66\n"
    "sym any 00-1f,21-2f,3a-40,5b-60,7b-7f,nonascii\n"
    "ws any 20\n";

[[noreturn]] void fail(const std::string& msg) {
    throw Error(ErrorCode::InvalidHierarchy, "hierarchy: " + msg);
}

unsigned parse_hex_byte(std::string_view s) {
    if (s.empty() || s.size() > 2) fail("bad character code '" + std::string(s) + "'");
    unsigned v = 0;
    for (char c : s) {
        v <<= 4;
        if (c >= '0' && c <= '9') v |= unsigned(c - '0');
        else if (c >= 'a' && c <= 'f') v |= unsigned(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F') v |= unsigned(c - 'A' + 10);
        else fail("bad character code '" + std::string(s) + "'");
    }
    if (v > 0x7f) fail("character code out of ASCII range: " + std::string(s));
    return v;
}

void parse_ranges(std::string_view spec, TokenClass& node) {
    if (spec == "*") {
        node.ascii.set();
        node.non_ascii = true;
        return;
    }
    std::size_t start = 0;
    while (start <= spec.size()) {
        std::size_t comma = spec.find(',', start);
        std::string_view item = spec.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                    : comma - start);
        if (item == "nonascii") {
            node.non_ascii = true;
        } else if (auto dash = item.find('-'); dash != std::string_view::npos) {
            unsigned lo = parse_hex_byte(item.substr(0, dash));
            unsigned hi = parse_hex_byte(item.substr(dash + 1));
            if (lo > hi) fail("empty range " + std::string(item));
            for (unsigned c = lo; c <= hi; ++c) node.ascii.set(c);
        } else {
            node.ascii.set(parse_hex_byte(item));
        }
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
}

std::string format_ranges(const TokenClass& node) {
    static const char* digits = "0123456789abcdef";
    auto hex = [&](unsigned v) { return std::string{digits[v >> 4], digits[v & 15]}; };
    std::string out;
    unsigned c = 0;
    while (c < 128) {
        if (!node.ascii.test(c)) {
            ++c;
            continue;
        }
        unsigned end = c;
        while (end + 1 < 128 && node.ascii.test(end + 1)) ++end;
        if (!out.empty()) out += ',';
        out += hex(c);
        if (end > c) out += '-' + hex(end);
        c = end + 1;
    }
    if (node.non_ascii) out += out.empty() ? "nonascii" : ",nonascii";
    if (out.empty()) out = "-";
    return out;
}

bool subset_of(const TokenClass& a, const TokenClass& b) {
    return (a.ascii & ~b.ascii).none() && (!a.non_ascii || b.non_ascii);
}

bool valid_name(std::string_view name) {
    if (name.empty() || !(name[0] >= 'a' && name[0] <= 'z')) return false;
    for (char c : name)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
    return true;
}

}  // namespace

Hierarchy::Hierarchy(std::vector<TokenClass> classes) : classes_(std::move(classes)) {
    if (classes_.empty()) fail("no classes");
    if (classes_.size() > 1000) fail("too many classes");
    std::optional<ClassId> root;
    std::unordered_set<std::string> names;
    for (std::size_t i = 0; i < classes_.size(); ++i) {
        const auto& node = classes_[i];
        if (!valid_name(node.name)) fail("invalid class name '" + node.name + "'");
        if (!names.insert(node.name).second) fail("duplicate class '" + node.name + "'");
        if (!node.parent) {
            if (root) fail("more than one root");
            root = static_cast<ClassId>(i);
        } else {
            if (*node.parent >= i) fail("parent of '" + node.name + "' must be declared before it");
            if (!subset_of(node, classes_[*node.parent]))
                fail("class '" + node.name + "' is not a subset of its parent");
        }
        if (node.ascii.none() && !node.non_ascii) fail("class '" + node.name + "' is empty");
    }
    if (!root) fail("no root");
    root_ = *root;
    const auto& r = classes_[root_];
    if (!r.ascii.all() || !r.non_ascii) fail("root must contain every character");

    is_leaf_.assign(classes_.size(), true);
    for (const auto& node : classes_)
        if (node.parent) is_leaf_[*node.parent] = false;

    // FNV-1a over the canonical serialization.
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : serialize()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    fingerprint_ = h;
}

const Hierarchy& Hierarchy::standard() {
    static const Hierarchy h = parse(kStandardDefinition);
    return h;
}

Hierarchy Hierarchy::parse(std::string_view text) {
    std::vector<TokenClass> classes;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        std::string name, parent, ranges, extra;
        if (!(fields >> name)) continue;
        if (!(fields >> parent >> ranges) || (fields >> extra))
            fail("expected 'name parent ranges' in line: " + line);
        TokenClass node;
        node.name = name;
        if (parent != "-") {
            std::optional<ClassId> pid;
            for (std::size_t i = 0; i < classes.size(); ++i)
                if (classes[i].name == parent) pid = static_cast<ClassId>(i);
            if (!pid) fail("unknown parent '" + parent + "' (parents must be declared first)");
            node.parent = pid;
        }
        parse_ranges(ranges, node);
        classes.push_back(std::move(node));
    }
    return Hierarchy(std::move(classes));
}

Hierarchy Hierarchy::load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read hierarchy file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

Hierarchy Hierarchy::from_environment() {
    if (const char* p = std::getenv("PATLAKE_HIERARCHY"); p && *p) return load_file(p);
    return standard();
}

std::string Hierarchy::serialize() const {
    std::string out;
    for (const auto& node : classes_) {
        out += node.name;
        out += ' ';
        out += node.parent ? classes_[*node.parent].name : "-";
        out += ' ';
        out += format_ranges(node);
        out += '\n';
    }
    return out;
}

std::optional<ClassId> Hierarchy::find(std::string_view name) const {
    for (std::size_t i = 0; i < classes_.size(); ++i)
        if (classes_[i].name == name) return static_cast<ClassId>(i);
    return std::nullopt;
}

bool Hierarchy::is_ancestor(ClassId ancestor, ClassId descendant) const {
    std::optional<ClassId> cur = descendant;
    while (cur) {
        if (*cur == ancestor) return true;
        cur = classes_[*cur].parent;
    }
    return false;
}

std::vector<ClassId> Hierarchy::chain(char32_t cp) const {
    std::optional<ClassId> cur;
    for (std::size_t i = 0; i < classes_.size() && !cur; ++i)
        if (is_leaf_[i] && classes_[i].contains(cp)) cur = static_cast<ClassId>(i);
    if (!cur) cur = root_;
    std::vector<ClassId> out;
    while (cur) {
        out.push_back(*cur);
        cur = classes_[*cur].parent;
    }
    return out;
}

std::vector<ClassId> Hierarchy::covering_classes(std::u32string_view text) const {
    std::vector<ClassId> out;
    for (std::size_t i = 0; i < classes_.size(); ++i) {
        if (i == root_) continue;
        bool all = !text.empty();
        for (char32_t cp : text)
            if (!classes_[i].contains(cp)) {
                all = false;
                break;
            }
        if (all) out.push_back(static_cast<ClassId>(i));
    }
    return out;
}

std::string Hierarchy::fingerprint_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) s[15 - i] = digits[(fingerprint_ >> (4 * i)) & 15];
    return s;
}

}  // namespace patlake
