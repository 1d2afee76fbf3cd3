// SPDX-License-Identifier: Apache-2.0
#ifdef GRADFIS_HAS_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif

#include "gradfis/fetch.hpp"

#include <fstream>
#include <string>

#include <httplib.h>

#include "gradfis/error.hpp"

namespace gradfis {

namespace {

struct ParsedUrl {
  std::string scheme;
  std::string host;
  std::string path;
};

ParsedUrl parse_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("malformed url: " + url);
  }
  ParsedUrl parsed;
  parsed.scheme = url.substr(0, scheme_end);
  const auto host_start = scheme_end + 3;
  const auto path_start = url.find('/', host_start);
  if (path_start == std::string::npos) {
    parsed.host = url.substr(host_start);
    parsed.path = "/";
  } else {
    parsed.host = url.substr(host_start, path_start - host_start);
    parsed.path = url.substr(path_start);
  }
  return parsed;
}

std::string http_get(const std::string& url) {
  const ParsedUrl parsed = parse_url(url);
  auto run = [&parsed](auto& client) {
    client.set_follow_location(true);
    client.set_connection_timeout(30);
    client.set_read_timeout(120);
    auto response = client.Get(parsed.path);
    if (!response) {
      throw IoError("download failed for " + parsed.host + parsed.path + ": " +
                    httplib::to_string(response.error()));
    }
    if (response->status != 200) {
      throw IoError("download failed for " + parsed.host + parsed.path +
                    ": HTTP " + std::to_string(response->status));
    }
    return response->body;
  };

  if (parsed.scheme == "https") {
#ifdef GRADFIS_HAS_TLS
    httplib::SSLClient client(parsed.host, 443);
    return run(client);
#else
    throw IoError("built without TLS support; cannot fetch " + url);
#endif
  }
  if (parsed.scheme == "http") {
    httplib::Client client(parsed.host, 80);
    return run(client);
  }
  throw ConfigError("unsupported url scheme: " + parsed.scheme);
}

}  // namespace

FetchResult fetch_dataset(const DatasetSpec& spec,
                          const std::filesystem::path& data_dir) {
  std::filesystem::create_directories(data_dir);
  const std::filesystem::path destination = data_dir / spec.filename;

  if (std::filesystem::exists(destination)) {
    load_csv(spec, data_dir);  // throws if the existing file is unusable
    return {destination, false};
  }

  const std::string body = http_get(spec.url);

  const std::filesystem::path staged = destination.string() + ".part";
  {
    std::ofstream out(staged, std::ios::binary);
    if (!out) throw IoError("cannot write " + staged.string());
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
  }
  std::filesystem::rename(staged, destination);

  try {
    load_csv(spec, data_dir);
  } catch (const Error&) {
    std::filesystem::remove(destination);
    throw;
  }
  return {destination, true};
}

}  // namespace gradfis
