#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <sys/wait.h>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "simvec/chart/data.hpp"

namespace simvec::chart {

/// External source of data specs: a shell command reading the request on
/// stdin, or an http:// endpoint taking it as a POST body. Either answers
/// with one DataSpec JSON object.
struct TopicProvider {
  std::string command;
  std::string endpoint;
  int timeout_seconds = 10;

  [[nodiscard]] bool configured() const { return !command.empty() || !endpoint.empty(); }
};

inline nlohmann::json provider_request(std::uint64_t topic_seed) {
  return {{"topicSeed", topic_seed}, {"wantedAttributes", {"categorical", "temporal", "quantitative"}}};
}

namespace detail {

inline std::string shell_quote(std::string_view s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

inline std::optional<std::string> run_command(const TopicProvider& p, const std::string& request, std::string& error) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto req = dir / ("simvec-topic-" + std::to_string(std::hash<std::string>{}(request)) + ".json");
  {
    std::ofstream f(req, std::ios::binary);
    f << request;
  }
  const std::string cmd = "timeout -k 1 " + std::to_string(p.timeout_seconds) + " sh -c " + shell_quote(p.command) +
                          " < " + shell_quote(req.string());
  std::FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) {
    error = "cannot start provider command";
    std::filesystem::remove(req);
    return std::nullopt;
  }
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
  const int status = ::pclose(pipe);
  std::filesystem::remove(req);
  if (status != 0) {
    error = WIFEXITED(status) && WEXITSTATUS(status) == 124 ? "provider timed out" : "provider command failed";
    return std::nullopt;
  }
  return out;
}

inline std::optional<std::string> run_http(const TopicProvider& p, const std::string& request, std::string& error) {
  const std::string& url = p.endpoint;
  const auto scheme = url.find("://");
  const auto slash = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  const std::string host = url.substr(0, slash);
  const std::string path = slash == std::string::npos ? "/" : url.substr(slash);
  httplib::Client client(host);
  client.set_connection_timeout(p.timeout_seconds, 0);
  client.set_read_timeout(p.timeout_seconds, 0);
  client.set_write_timeout(p.timeout_seconds, 0);
  const auto res = client.Post(path, request, "application/json");
  if (!res) {
    error = "provider request failed: " + httplib::to_string(res.error());
    return std::nullopt;
  }
  if (res->status != 200) {
    error = "provider answered HTTP " + std::to_string(res->status);
    return std::nullopt;
  }
  return res->body;
}

}  // namespace detail

/// Spec from the provider, or nothing with `warning` set.
inline std::optional<DataSpec> fetch_spec(const TopicProvider& p, std::uint64_t topic_seed, std::string& warning) {
  if (!p.configured()) return std::nullopt;
  const std::string request = provider_request(topic_seed).dump();
  std::string error;
  const auto body = p.command.empty() ? detail::run_http(p, request, error) : detail::run_command(p, request, error);
  if (!body) {
    warning = error + "; using built-in topic bank";
    return std::nullopt;
  }
  try {
    DataSpec spec = nlohmann::json::parse(*body).get<DataSpec>();
    check_spec(spec);
    return spec;
  } catch (const std::exception& e) {
    warning = std::string("provider response rejected: ") + e.what() + "; using built-in topic bank";
    return std::nullopt;
  }
}

/// Provider spec when it answers in time, else the built-in bank.
inline DataSpec synth_spec_with(const TopicProvider& p, std::uint64_t seed, std::string* warning = nullptr) {
  std::string w;
  if (auto spec = fetch_spec(p, seed, w)) return *spec;
  if (warning) *warning = w;
  return synth_spec(seed);
}

}  // namespace simvec::chart
