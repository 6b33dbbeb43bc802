#pragma once

#include <memory>
#include <thread>

#include "ssi/share_links.hpp"

namespace ssi {

/// Minimal HTTP face over a LinkService:
///   POST   /links           create a link from a presentation
///   GET    /share/{token}   fetch the presentation (404 unknown,
///                           410 expired, consumed or revoked)
///   DELETE /links/{token}   holder-signed revocation
/// `now` defaults to the ledger height; a ?now= query overrides it so
/// tests can probe the window without mining blocks.
class ShareLinkServer {
 public:
  ShareLinkServer(LinkService& links, const DidRegistry& registry, Rng& rng);
  ~ShareLinkServer();

  /// Binds an ephemeral port on host and serves in a background
  /// thread. Returns the port.
  int start(const std::string& host);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread worker_;
};

}  // namespace ssi
