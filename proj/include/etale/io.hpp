#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "etale/builders.hpp"
#include "etale/error.hpp"
#include "etale/gmodule.hpp"
#include "etale/groupoid.hpp"
#include "etale/gsheaf.hpp"
#include "etale/morita.hpp"

namespace etale {

/// Syntax, schema or reference problem in an input document, with the
/// position of the offending value and a one-line fix hint.
class ParseError : public Error {
 public:
  ParseError(std::string origin, std::size_t line, std::size_t column, std::string message,
             std::string hint);

  const std::string& origin() const { return origin_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }
  const std::string& hint() const { return hint_; }

 private:
  std::string origin_;
  std::size_t line_;
  std::size_t column_;
  std::string message_;
  std::string hint_;
};

enum class FileKind { groupoid, module, sheaf, functor, span, graph };

std::string to_string(FileKind kind);
std::optional<FileKind> parse_file_kind(std::string_view name);
// Guesses the kind from the top-level keys; throws ParseError when unsure.
FileKind detect_kind(std::string_view text, std::string_view origin = "<input>");

// ---- In-memory parsing -----------------------------------------------------
// All of these check syntax, schema and references; none of them checks
// axioms (use the validate_* functions).

FiniteGroupoid parse_groupoid(std::string_view text, std::string_view origin = "<input>");
GModule parse_module(std::string_view text, const GroupoidPtr& g,
                     std::string_view origin = "<input>");
GSheaf parse_sheaf(std::string_view text, const GroupoidPtr& g,
                   std::string_view origin = "<input>");
GroupoidFunctor parse_functor(std::string_view text, const GroupoidPtr& source,
                              const GroupoidPtr& target, std::string_view origin = "<input>");
GraphSpec parse_graph(std::string_view text, std::string_view origin = "<input>");

// ---- Files ---------------------------------------------------------------------
// Module and sheaf files may name their groupoid file ("groupoid"), functor
// files their "source" and "target"; paths are relative to the referring
// file. An explicitly passed groupoid wins over the reference.

std::string read_file(const std::filesystem::path& path);
GroupoidPtr load_groupoid(const std::filesystem::path& path);
GModule load_module(const std::filesystem::path& path, GroupoidPtr g = nullptr);
GSheaf load_sheaf(const std::filesystem::path& path, GroupoidPtr g = nullptr);
GroupoidFunctor load_functor(const std::filesystem::path& path, GroupoidPtr source = nullptr,
                             GroupoidPtr target = nullptr);
// Span files: {"apex": groupoid file, "left": functor file, "right":
// functor file}; each functor file names its target.
MoritaSpan load_span(const std::filesystem::path& path);
GraphSpec load_graph(const std::filesystem::path& path);

// ---- Serialisation -------------------------------------------------------------
// Deterministic, declaration-ordered JSON in the same schemas.

std::string to_json(const FiniteGroupoid& g);
std::string to_json(const GModule& m, std::string_view groupoid_ref = {});
std::string to_json(const GSheaf& e, std::string_view groupoid_ref = {});
std::string to_json(const GroupoidFunctor& f, std::string_view source_ref = {},
                    std::string_view target_ref = {});
std::string to_json(const GraphSpec& spec);
std::string span_json(std::string_view apex_ref, std::string_view left_ref,
                      std::string_view right_ref);

}  // namespace etale
