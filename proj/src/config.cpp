#include "reprank/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "reprank/errors.hpp"

namespace reprank {
namespace {

std::string trimmed(const std::string& text) {
  const auto first = text.find_first_not_of(" \t");
  if (first == std::string::npos) {
    return {};
  }
  return text.substr(first, text.find_last_not_of(" \t") - first + 1);
}

template <typename T>
T parse_integer(const std::string& field, const std::string& raw) {
  const auto text = trimmed(raw);
  T value{};
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
    throw ConfigError(field + ": '" + raw + "' is not a valid non-negative integer");
  }
  return value;
}

double parse_real(const std::string& field, const std::string& raw) {
  const auto text = trimmed(raw);
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) {
      throw std::invalid_argument("trailing characters");
    }
    return value;
  } catch (const std::exception&) {
    throw ConfigError(field + ": '" + raw + "' is not a number");
  }
}

bool parse_bool(const std::string& field, const std::string& raw) {
  std::string text = trimmed(raw);
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw ConfigError(field + ": '" + raw + "' is not a boolean");
}

std::vector<ConfigField> make_fields() {
  using K = ConfigField::Kind;
  std::vector<ConfigField> f;
  auto scalar = [&](std::string name, std::string help,
                    std::function<void(RunConfig&, const std::string&)> set) {
    f.push_back({std::move(name), K::kScalar, std::move(help), std::move(set), {}});
  };

  scalar("seed", "global seed for every random stage",
         [](RunConfig& c, const std::string& v) { c.seed = parse_integer<std::uint64_t>("seed", v); });
  scalar("repetitions", "evaluations per prompt (default 5)", [](RunConfig& c, const std::string& v) {
    c.repetitions = parse_integer<std::size_t>("repetitions", v);
  });
  f.push_back({"fraction", K::kList,
               "subset fraction in (0,1]; repeatable (default 0.25 0.5 0.75; the full set is always added)",
               [](RunConfig& c, const std::string& v) { c.fractions.push_back(parse_real("fraction", v)); },
               [](RunConfig& c) { c.fractions.clear(); }});
  scalar("subset-key", "subset ordering key: kendalls_w | top_agreement | bottom_agreement",
         [](RunConfig& c, const std::string& v) {
           try {
             c.subset_key = subset_key_from_string(trimmed(v));
           } catch (const std::invalid_argument& e) {
             throw ConfigError(std::string("subset-key: ") + e.what());
           }
         });
  scalar("cap-per-language", "maximum prompts sampled per language (default 100)",
         [](RunConfig& c, const std::string& v) {
           c.cap_per_language = parse_integer<std::size_t>("cap-per-language", v);
         });
  f.push_back({"include-all-equal", K::kFlag,
               "keep prompts whose responses all have the same Borda total",
               [](RunConfig& c, const std::string& v) {
                 c.include_all_equal = parse_bool("include-all-equal", v);
               },
               {}});
  scalar("prompts", "input prompts file (JSON lines)",
         [](RunConfig& c, const std::string& v) { c.prompts = v; });
  scalar("responses", "input responses file (JSON lines)",
         [](RunConfig& c, const std::string& v) { c.responses = v; });
  scalar("out-dir", "directory for every stage output (default ./out)",
         [](RunConfig& c, const std::string& v) { c.out_dir = v; });
  scalar("endpoint-url", "chat-completions base URL, e.g. https://api.openai.com/v1",
         [](RunConfig& c, const std::string& v) { c.endpoint.base_url = trimmed(v); });
  scalar("model", "evaluator model name",
         [](RunConfig& c, const std::string& v) { c.endpoint.model = trimmed(v); });
  scalar("api-key-env", "name of the environment variable holding the API key (empty: none)",
         [](RunConfig& c, const std::string& v) { c.endpoint.api_key_env = trimmed(v); });
  scalar("max-parallel", "concurrent evaluator requests (default 4)",
         [](RunConfig& c, const std::string& v) {
           c.endpoint.max_parallel = parse_integer<std::size_t>("max-parallel", v);
         });
  scalar("max-attempts", "attempts per request including the first (default 3)",
         [](RunConfig& c, const std::string& v) {
           c.endpoint.max_attempts = parse_integer<std::size_t>("max-attempts", v);
         });
  scalar("backoff-ms", "initial retry backoff in milliseconds, doubled per retry (default 2000)",
         [](RunConfig& c, const std::string& v) {
           c.endpoint.initial_backoff =
               std::chrono::milliseconds(parse_integer<std::int64_t>("backoff-ms", v));
         });
  scalar("max-tokens", "evaluator output token limit (default 1024)",
         [](RunConfig& c, const std::string& v) {
           c.endpoint.max_tokens = parse_integer<int>("max-tokens", v);
         });
  scalar("temperature", "evaluator temperature (default 0)", [](RunConfig& c, const std::string& v) {
    c.endpoint.temperature = parse_real("temperature", v);
  });
  scalar("timeout-s", "per-request timeout in seconds (default 300)",
         [](RunConfig& c, const std::string& v) {
           c.endpoint.timeout = std::chrono::seconds(parse_integer<std::int64_t>("timeout-s", v));
         });
  f.push_back({"quality", K::kList, "simulated judge latent quality MODEL=VALUE; repeatable",
               [](RunConfig& c, const std::string& v) {
                 const auto eq = v.rfind('=');
                 if (eq == std::string::npos || eq == 0) {
                   throw ConfigError("quality: expected MODEL=VALUE, got '" + v + "'");
                 }
                 c.simulation.qualities[trimmed(v.substr(0, eq))] =
                     parse_real("quality", v.substr(eq + 1));
               },
               [](RunConfig& c) { c.simulation.qualities.clear(); }});
  scalar("noise-scale", "simulated judge Gaussian noise std-dev (default 1.0)",
         [](RunConfig& c, const std::string& v) {
           c.simulation.noise_scale = parse_real("noise-scale", v);
         });
  scalar("tie-threshold", "simulated judge: neighbours closer than this are tied (default 0)",
         [](RunConfig& c, const std::string& v) {
           c.simulation.tie_threshold = parse_real("tie-threshold", v);
         });
  scalar("prompt-spread", "simulated judge: per-prompt quality jitter std-dev (default 0)",
         [](RunConfig& c, const std::string& v) {
           c.simulation.prompt_spread = parse_real("prompt-spread", v);
         });
  return f;
}

std::string file_key(const std::string& name) {
  std::string key = name;
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

std::string env_name(const std::string& name) {
  std::string key = "REPRANK_" + file_key(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return key;
}

std::string scalar_text(const nlohmann::json& value) {
  if (value.is_string()) {
    return value.get<std::string>();
  }
  if (value.is_boolean()) {
    return value.get<bool>() ? "true" : "false";
  }
  if (value.is_number()) {
    return value.dump();
  }
  throw ConfigError("expected a string, number or boolean, got " + value.dump());
}

}  // namespace

void RunConfig::validate() const {
  if (repetitions < 1) {
    throw ConfigError("repetitions must be at least 1");
  }
  if (cap_per_language < 1) {
    throw ConfigError("cap-per-language must be at least 1");
  }
  for (double fraction : fractions) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
      throw ConfigError("fraction " + std::to_string(fraction) + " is outside (0, 1]");
    }
  }
  if (simulation.noise_scale < 0.0 || simulation.tie_threshold < 0.0 ||
      simulation.prompt_spread < 0.0) {
    throw ConfigError("simulation noise-scale, tie-threshold and prompt-spread must be non-negative");
  }
}

const std::vector<ConfigField>& config_fields() {
  static const std::vector<ConfigField> fields = make_fields();
  return fields;
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config file " + path.string() + " must hold a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    const auto& fields = config_fields();
    auto it = std::find_if(fields.begin(), fields.end(),
                           [&](const ConfigField& f) { return file_key(f.name) == key; });
    if (it == fields.end()) {
      throw ConfigError("config file " + path.string() + ": unknown key '" + key + "'");
    }
    try {
      if (it->kind == ConfigField::Kind::kList) {
        it->reset_list(config);
        if (value.is_object()) {
          for (const auto& [k, v] : value.items()) {
            it->set(config, k + "=" + scalar_text(v));
          }
        } else if (value.is_array()) {
          for (const auto& item : value) {
            it->set(config, scalar_text(item));
          }
        } else {
          it->set(config, scalar_text(value));
        }
      } else {
        it->set(config, scalar_text(value));
      }
    } catch (const ConfigError& e) {
      throw ConfigError("config file " + path.string() + ": " + e.what());
    }
  }
}

void apply_environment(RunConfig& config, const EnvLookup& lookup) {
  for (const auto& field : config_fields()) {
    const auto value = lookup(env_name(field.name));
    if (!value) {
      continue;
    }
    if (field.kind == ConfigField::Kind::kList) {
      field.reset_list(config);
      std::size_t start = 0;
      while (start <= value->size()) {
        const auto comma = value->find(',', start);
        const auto item = trimmed(value->substr(start, comma - start));
        if (!item.empty()) {
          field.set(config, item);
        }
        if (comma == std::string::npos) {
          break;
        }
        start = comma + 1;
      }
    } else {
      field.set(config, *value);
    }
  }
}

std::optional<std::string> process_env(const std::string& name) {
  const char* value = std::getenv(name.c_str());
  if (value == nullptr) {
    return std::nullopt;
  }
  return std::string(value);
}

}  // namespace reprank
