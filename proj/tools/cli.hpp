#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "lfends/rays.hpp"
#include "lfends/tower.hpp"

namespace lfends::cli {

/// Runs one `ends <verb> [flags]` invocation; args excludes the program name.
/// Returns 0 on success, 1 on a domain error, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Layered fiber tree as a DOT digraph; nodes are named L<level>_<index>.
std::string emit_dot(const EndTower& t);
std::string emit_dot(const TreeEmbedding& emb);

}  // namespace lfends::cli
