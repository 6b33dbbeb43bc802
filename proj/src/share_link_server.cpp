#include "ssi/share_link_server.hpp"

#include "httplib.h"
#include "ssi/errors.hpp"

namespace ssi {

namespace {

int status_for(Errc code) {
  switch (code) {
    case Errc::UnknownToken: return 404;
    case Errc::Expired:
    case Errc::Consumed:
    case Errc::Revoked: return 410;
    case Errc::NotHolder: return 403;
    case Errc::ExpiryInPast:
    case Errc::ParseError: return 400;
    default: return 500;
  }
}

void send_error(httplib::Response& res, const SsiError& e) {
  res.status = status_for(e.code());
  res.set_content(Json{{"error", e.name()}, {"detail", e.what()}}.dump(),
                  "application/json");
}

}  // namespace

struct ShareLinkServer::Impl {
  LinkService& links;
  const DidRegistry& registry;
  Rng& rng;
  httplib::Server server;

  Impl(LinkService& l, const DidRegistry& r, Rng& g)
      : links(l), registry(r), rng(g) {
    wire();
  }

  Height now_param(const httplib::Request& req) const {
    if (req.has_param("now")) {
      return static_cast<Height>(std::stoull(req.get_param_value("now")));
    }
    return registry.ledger().height();
  }

  void wire() {
    server.Post("/links", [this](const httplib::Request& req,
                                 httplib::Response& res) {
      try {
        Json body = Json::parse(req.body);
        Presentation presentation =
            Presentation::from_json(body.at("presentation"));
        const Json& pj = body.at("policy");
        LinkPolicy policy;
        if (pj.at("type") == "time_window") {
          policy = TimeWindowPolicy{pj.at("expires_at").get<Height>()};
        } else if (pj.at("type") == "one_off") {
          policy = OneOffPolicy{};
        } else {
          fail(Errc::ParseError, "policy type must be time_window or one_off");
        }
        ShareLink link = links.create(presentation, policy, now_param(req), rng);
        res.status = 201;
        res.set_content(Json{{"token", link.token},
                             {"url", "/share/" + link.token}}
                            .dump(),
                        "application/json");
      } catch (const SsiError& e) {
        send_error(res, e);
      } catch (const Json::exception& e) {
        send_error(res, SsiError(Errc::ParseError, e.what()));
      }
    });

    server.Get("/share/:token", [this](const httplib::Request& req,
                                       httplib::Response& res) {
      try {
        Presentation p =
            links.access(req.path_params.at("token"), now_param(req));
        res.set_content(p.to_json().dump(), "application/json");
      } catch (const SsiError& e) {
        send_error(res, e);
      }
    });

    server.Delete("/links/:token", [this](const httplib::Request& req,
                                          httplib::Response& res) {
      try {
        Json body = Json::parse(req.body);
        Bytes sig = from_hex(body.at("signature").get<std::string>());
        Signature signature{};
        if (sig.size() != signature.size()) {
          fail(Errc::ParseError, "signature must be 64 bytes");
        }
        std::copy(sig.begin(), sig.end(), signature.begin());
        links.revoke(req.path_params.at("token"), signature, registry);
        res.set_content(Json{{"status", "revoked"}}.dump(), "application/json");
      } catch (const SsiError& e) {
        send_error(res, e);
      } catch (const Json::exception& e) {
        send_error(res, SsiError(Errc::ParseError, e.what()));
      }
    });
  }
};

ShareLinkServer::ShareLinkServer(LinkService& links,
                                 const DidRegistry& registry, Rng& rng)
    : impl_(std::make_unique<Impl>(links, registry, rng)) {}

ShareLinkServer::~ShareLinkServer() { stop(); }

int ShareLinkServer::start(const std::string& host) {
  int port = impl_->server.bind_to_any_port(host);
  if (port <= 0) throw std::runtime_error("could not bind " + host);
  worker_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void ShareLinkServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
  if (worker_.joinable()) worker_.join();
}

}  // namespace ssi
