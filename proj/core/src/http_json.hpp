#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace ertrace::detail {

// A parsed "http://host[:port][/path]" service address.
struct Endpoint {
  std::string host;
  int port = 80;
  std::string path = "/";

  std::string base() const;
};

// Throws kInvalidArgument for anything that is not a plain http URL.
Endpoint parse_endpoint(std::string_view url);

// POSTs `body` as JSON and returns the parsed response body. Transport
// failures and non-2xx statuses raise kServiceUnavailable; an unparsable
// body raises kMalformedResponse.
nlohmann::json post_json(const Endpoint& endpoint, const nlohmann::json& body,
                         int timeout_seconds = 30);

}  // namespace ertrace::detail
