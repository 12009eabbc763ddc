#pragma once

#include <string_view>

#include "lacuna/js/ast.hpp"
#include "lacuna/js/lexer.hpp"

namespace lacuna::js {

// Parses a whole script (sloppy mode, ES2020-ish subset). Throws SyntaxError
// on malformed input. Returned nodes live in the arena.
Node* parse_program(std::string_view source, AstArena& arena);

}  // namespace lacuna::js
