#pragma once

#include "eqlearn/concept_class.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eqlearn {

/// Contents of a class file. `tau` is the optional prior over concepts, in
/// concept order, used by finite families.
struct ClassFile {
    ConceptClass cls;
    std::optional<std::vector<Rational>> tau;
};

/// Parses the JSON class-file format:
///
///   {"domain": ["x1", ...], "mu": ["1/6", ...], "concepts": {"A": "010", ...},
///    "tau": ["1/2", ...]}
///
/// Concept order is file order. Throws ValidationError; the kind tells the
/// failure apart (malformed weight, weights not summing to 1, duplicate
/// concept, bitstring length mismatch, ...).
ClassFile parse_class_file(std::string_view text);
ClassFile read_class_file(const std::filesystem::path& path);

ConceptClass load_class(std::string_view text);
std::string save_class(const ConceptClass& cls, const std::optional<std::vector<Rational>>& tau = std::nullopt);

/// Throws std::runtime_error when the file cannot be written.
void write_class_file(const std::filesystem::path& path, const ConceptClass& cls);

} // namespace eqlearn
