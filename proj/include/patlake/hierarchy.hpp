#pragma once

#include <bitset>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace patlake {

using ClassId = std::uint16_t;

/// A node of the generalization hierarchy: a named character class.
struct TokenClass {
    std::string name;
    std::optional<ClassId> parent;  // empty for the root
    std::bitset<128> ascii;         // ASCII members
    bool non_ascii = false;         // every non-ASCII code point is a member

    bool contains(char32_t cp) const {
        return cp < 128 ? ascii.test(static_cast<std::size_t>(cp)) : non_ascii;
    }
};

/// Token-class lattice used to generalize literal text into patterns.
///
/// Parent edges form a tree rooted at the class that matches every character.
/// A character's upward chain starts at the first declared leaf class that
/// contains it. Classes that are not on any chain (e.g. `hex`) are still
/// reachable during generalization through membership: a token may generalize
/// into any non-root class whose character set contains all of its characters.
class Hierarchy {
public:
    /// Built-in lattice: any > {alnum > {letter > {upper, lower}, num > digit, hex}, sym, ws}.
    static const Hierarchy& standard();

    /// Parses the line format produced by `serialize()`.
    static Hierarchy parse(std::string_view text);
    static Hierarchy load_file(const std::filesystem::path& path);

    /// `standard()` unless PATLAKE_HIERARCHY names a definition file.
    static Hierarchy from_environment();

    std::string serialize() const;

    std::size_t size() const { return classes_.size(); }
    const TokenClass& at(ClassId id) const { return classes_.at(id); }
    const std::vector<TokenClass>& classes() const { return classes_; }
    ClassId root() const { return root_; }
    std::optional<ClassId> find(std::string_view name) const;

    bool contains(ClassId id, char32_t cp) const { return classes_[id].contains(cp); }

    /// True if `ancestor` is `descendant` or lies on its parent path.
    bool is_ancestor(ClassId ancestor, ClassId descendant) const;

    /// Chain from the character's base class up to and including the root.
    std::vector<ClassId> chain(char32_t cp) const;

    /// Non-root classes containing every character of `text`, in declaration order.
    std::vector<ClassId> covering_classes(std::u32string_view text) const;

    /// Stable 64-bit hash of the full structure.
    std::uint64_t fingerprint() const { return fingerprint_; }
    std::string fingerprint_hex() const;

    friend bool operator==(const Hierarchy& a, const Hierarchy& b) {
        return a.fingerprint_ == b.fingerprint_ && a.serialize() == b.serialize();
    }

private:
    explicit Hierarchy(std::vector<TokenClass> classes);

    std::vector<TokenClass> classes_;
    std::vector<bool> is_leaf_;
    ClassId root_ = 0;
    std::uint64_t fingerprint_ = 0;
};

}  // namespace patlake
