#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "gearquest/task.hpp"

namespace gearquest {

inline constexpr std::string_view kPromptTemplateVersion = "gearquest-prompt/1";

// The template text with {{placeholders}}; hashing it pins prompt wording.
std::string_view prompt_template();
std::string prompt_template_hash();

// Deterministic prompt: rules, action API, character, and the task
// environment. Distractor items are rendered exactly like real ones.
std::string render_prompt(const Task& task);

// Whitespace-separated token count used as a length proxy.
std::size_t token_proxy_count(std::string_view text);

}  // namespace gearquest
