#pragma once

#include "markov_id/markov_core.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace markov_id {

// JSON form: {"states": n, "edges": [[i,j],...], "rows": [[...],...]}.
// Doubles are written in shortest round-trip form, so read(write(m)) == m.
std::string matrix_to_json(const TransitionMatrix& p);
TransitionMatrix matrix_from_json(std::string_view text);

// Plain text: one row per line, whitespace-separated; '#' starts a comment.
// The edge set is inferred from the nonzero entries.
std::string matrix_to_text(const TransitionMatrix& p);
TransitionMatrix matrix_from_text(std::string_view text);

// Dispatches on content: a leading '{' selects JSON, anything else text.
TransitionMatrix load_matrix(const std::filesystem::path& path);
void save_matrix(const std::filesystem::path& path, const TransitionMatrix& p);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace markov_id
