/*
 * Copyright 2026 The ontomatch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Minimal JSON-over-HTTP POST helper shared by the embedding service
// provider and the chat-completion client.

#include <cstdlib>
#include <optional>
#include <string>
#include <utility>

#include <httplib.h>

#include "ontomatch/error.hpp"

namespace ontomatch::http {

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;  // starts with '/'
};

inline Endpoint parse_endpoint(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::ConfigError, "endpoint URL must include a scheme: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

struct Response {
  int status = 0;
  std::string body;
};

// One POST attempt. Returns nullopt on a transport failure.
inline std::optional<Response> post_json(const Endpoint& ep, const std::string& body,
                                         const std::string& bearer_token, double timeout_s) {
  httplib::Client client(ep.base);
  auto secs = static_cast<time_t>(timeout_s);
  auto usecs = static_cast<time_t>((timeout_s - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  httplib::Headers headers;
  if (!bearer_token.empty()) headers.emplace("Authorization", "Bearer " + bearer_token);
  auto res = client.Post(ep.path, headers, body, "application/json");
  if (!res) return std::nullopt;
  return Response{res->status, res->body};
}

// Resolves a secret from the environment variable named in configuration.
inline std::string token_from_env(const std::string& env_name) {
  if (env_name.empty()) return {};
  const char* v = std::getenv(env_name.c_str());
  return v ? std::string(v) : std::string();
}

}  // namespace ontomatch::http
