#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "permeable/scene.hpp"

namespace permeable {

enum class Command { dist, theta_dist, certify, cb_rank, staircase, lipschitz, verify };

std::string_view to_string(Command c);
std::optional<Command> parse_command(std::string_view name);

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;   // a verification verdict differs from its expectation
inline constexpr int kExitUsage = 2;      // bad flags or scene
inline constexpr int kExitFailure = 3;    // a computation raised an error

struct CommandResult {
  int exit_code = kExitOk;
  std::string output;  // artifact text in the requested format
  std::string error;   // JSON error object when exit_code >= 2
};

/// Throws schema_violation naming the first scene field the command needs
/// but the scene lacks.
void require_scene_fields(Command cmd, const SceneConfig& cfg);

/// Runs one command on a validated scene. Never throws: errors become a
/// structured JSON object in `error` with exit code 2 (scene problems) or 3.
CommandResult execute_command(Command cmd, const SceneConfig& cfg);

}  // namespace permeable
