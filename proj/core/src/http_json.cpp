#include "http_json.hpp"

#include <charconv>

#include <httplib.h>

#include "ertrace/error.hpp"

namespace ertrace::detail {

std::string Endpoint::base() const {
  return "http://" + host + ":" + std::to_string(port);
}

Endpoint parse_endpoint(std::string_view url) {
  constexpr std::string_view kScheme = "http://";
  const auto bad = [&](const char* why) {
    return Error(ErrorCode::kInvalidArgument,
                 "bad endpoint '" + std::string(url) + "': " + why);
  };
  if (!url.starts_with(kScheme)) throw bad("expected http:// scheme");
  auto rest = url.substr(kScheme.size());
  Endpoint endpoint;
  const auto slash = rest.find('/');
  auto authority = rest.substr(0, slash);
  if (slash != std::string_view::npos) endpoint.path = std::string(rest.substr(slash));
  const auto colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    const auto port_text = authority.substr(colon + 1);
    int port = 0;
    auto [ptr, ec] = std::from_chars(port_text.data(),
                                     port_text.data() + port_text.size(), port);
    if (ec != std::errc{} || ptr != port_text.data() + port_text.size() ||
        port <= 0 || port > 65535) {
      throw bad("invalid port");
    }
    endpoint.port = port;
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) throw bad("missing host");
  endpoint.host = std::string(authority);
  return endpoint;
}

nlohmann::json post_json(const Endpoint& endpoint, const nlohmann::json& body,
                         int timeout_seconds) {
  httplib::Client client(endpoint.host, endpoint.port);
  client.set_connection_timeout(timeout_seconds, 0);
  client.set_read_timeout(timeout_seconds, 0);
  client.set_write_timeout(timeout_seconds, 0);
  auto result = client.Post(endpoint.path, body.dump(), "application/json");
  if (!result) {
    throw Error(ErrorCode::kServiceUnavailable,
                endpoint.base() + endpoint.path + ": " +
                    httplib::to_string(result.error()));
  }
  if (result->status < 200 || result->status >= 300) {
    throw Error(ErrorCode::kServiceUnavailable,
                endpoint.base() + endpoint.path + " answered HTTP " +
                    std::to_string(result->status));
  }
  try {
    return nlohmann::json::parse(result->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kMalformedResponse,
                std::string("response is not JSON: ") + e.what());
  }
}

}  // namespace ertrace::detail
