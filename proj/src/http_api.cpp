#include "modulecad/http_api.hpp"

#include <cmath>

#include "httplib.h"
#include "modulecad/document_io.hpp"
#include "modulecad/params.hpp"

namespace modulecad {

using nlohmann::json;

struct HttpApi::Impl {
    DocumentService& service;
    httplib::Server server;

    explicit Impl(DocumentService& s) : service(s) {}
};

namespace {

constexpr const char* kJson = "application/json";
constexpr const char* kSvg = "image/svg+xml";

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, const ApiError& e) { send_json(res, e.status, to_json(e)); }

[[noreturn]] void bad_request(const std::string& message) { fail(ErrorCode::usage, message); }

json parse_body(const httplib::Request& req) {
    try {
        json j = json::parse(req.body);
        if (!j.is_object()) bad_request("request body must be a JSON object");
        return j;
    } catch (const json::parse_error& e) {
        bad_request(std::string("malformed JSON body: ") + e.what());
    }
}

double body_number(const json& body, const char* key) {
    if (!body.contains(key) || !body[key].is_number()) {
        bad_request(std::string("\"") + key + "\" must be a number");
    }
    return body[key].get<double>();
}

Point body_point(const json& body, const char* key) {
    if (!body.contains(key)) bad_request(std::string("\"") + key + "\" is required");
    const json& v = body[key];
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        bad_request(std::string("\"") + key + "\" must be [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

std::optional<Id> body_layer(const json& body) {
    if (!body.contains("layer") || body["layer"].is_null()) return std::nullopt;
    if (!body["layer"].is_number_integer()) bad_request("\"layer\" must be an integer");
    return body["layer"].get<Id>();
}

double query_number(const httplib::Request& req, const char* key) {
    const std::string raw = req.get_param_value(key);
    try {
        std::size_t used = 0;
        const double v = std::stod(raw, &used);
        if (used != raw.size() || !std::isfinite(v)) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        bad_request(std::string("query parameter ") + key + " must be a number");
    }
}

Id path_id(const httplib::Request& req) { return std::stoll(req.matches[1].str()); }

json snap_json(const std::optional<SnapHit>& hit) {
    if (!hit) return {{"snap", nullptr}};
    return {{"snap",
             {{"point", json::array({hit->point.x, hit->point.y})},
              {"kind", to_string(hit->kind)},
              {"distance", hit->distance}}}};
}

// Runs a handler, translating domain errors into JSON error responses.
template <class Fn>
httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
        try {
            fn(req, res);
        } catch (const Error& e) {
            send_error(res, to_api_error(e));
        } catch (const std::exception& e) {
            send_error(res, {500, "internal", e.what()});
        }
    };
}

void install_routes(httplib::Server& srv, DocumentService& svc) {
    srv.Get("/api/drawing", guarded([&svc](const auto&, auto& res) {
        send_json(res, 200, svc.read([](const Drawing& d) { return drawing_to_json(d); }));
    }));

    srv.Get("/api/schemas", guarded([](const auto&, auto& res) {
        json out = json::object();
        for (Kind k : kAllKinds) out[std::string(to_string(k))] = schema_to_json(schema(k));
        send_json(res, 200, out);
    }));

    srv.Get("/api/modules", guarded([&svc](const auto&, auto& res) {
        send_json(res, 200, svc.read([](const Drawing& d) {
            json list = json::array();
            for (const auto& [id, m] : d.modules()) list.push_back(module_summary_json(m));
            return list;
        }));
    }));

    srv.Get(R"(/api/modules/(\d+))", guarded([&svc](const auto& req, auto& res) {
        const Id id = path_id(req);
        send_json(res, 200, svc.read([id](const Drawing& d) {
            const Module& m = d.module(id);
            json out = module_to_json(m);
            out["bbox"] = bbox_json(m.extent());
            out["position"] = m.position();
            return out;
        }));
    }));

    srv.Post("/api/modules", guarded([&svc](const auto& req, auto& res) {
        const json body = parse_body(req);
        if (!body.contains("kind") || !body["kind"].is_string()) bad_request("\"kind\" must be a string");
        if (!body.contains("params")) bad_request("\"params\" is required");
        const Id id = svc.add_module(parse_kind(body["kind"].get<std::string>()), body["params"],
                                     body_layer(body));
        send_json(res, 201, {{"id", id}});
    }));

    srv.Put(R"(/api/modules/(\d+)/params)", guarded([&svc](const auto& req, auto& res) {
        const Id id = path_id(req);
        const json body = parse_body(req);
        if (!body.contains("params")) bad_request("\"params\" is required");
        svc.set_params(id, body["params"]);
        send_json(res, 200, svc.read([id](const Drawing& d) { return module_summary_json(d.module(id)); }));
    }));

    srv.Post(R"(/api/modules/(\d+)/move)", guarded([&svc](const auto& req, auto& res) {
        const Id id = path_id(req);
        const json body = parse_body(req);
        svc.move_module(id, {body_number(body, "dx"), body_number(body, "dy")});
        send_json(res, 200, svc.read([id](const Drawing& d) { return module_summary_json(d.module(id)); }));
    }));

    srv.Post(R"(/api/modules/(\d+)/stretch)", guarded([&svc](const auto& req, auto& res) {
        const Id id = path_id(req);
        const json body = parse_body(req);
        svc.stretch_module(id, body_point(body, "base"), body_number(body, "sx"),
                           body_number(body, "sy"));
        send_json(res, 200, svc.read([id](const Drawing& d) { return module_summary_json(d.module(id)); }));
    }));

    srv.Delete(R"(/api/modules/(\d+))", guarded([&svc](const auto& req, auto& res) {
        const Id id = path_id(req);
        svc.delete_module(id);
        send_json(res, 200, {{"deleted", id}});
    }));

    srv.Get("/api/render", guarded([&svc](const auto& req, auto& res) {
        RenderOptions opts;
        const char* keys[] = {"x0", "y0", "x1", "y1"};
        int present = 0;
        for (const char* k : keys) present += req.has_param(k) ? 1 : 0;
        if (present != 0 && present != 4) bad_request("viewport needs all of x0, y0, x1, y1");
        if (present == 4) {
            const double x0 = query_number(req, "x0");
            const double y0 = query_number(req, "y0");
            const double x1 = query_number(req, "x1");
            const double y1 = query_number(req, "y1");
            opts.viewport = BBox{{std::min(x0, x1), std::min(y0, y1)}, {std::max(x0, x1), std::max(y0, y1)}};
        }
        res.status = 200;
        res.set_content(svc.render(opts), kSvg);
    }));

    srv.Get("/api/snap", guarded([&svc](const auto& req, auto& res) {
        for (const char* k : {"x", "y", "r"}) {
            if (!req.has_param(k)) bad_request(std::string("query parameter ") + k + " is required");
        }
        const double r = query_number(req, "r");
        if (!(r > 0.0)) bad_request("r must be > 0");
        send_json(res, 200, snap_json(svc.snap({query_number(req, "x"), query_number(req, "y")}, r)));
    }));

    srv.Get("/api/spec", guarded([&svc](const auto&, auto& res) {
        send_json(res, 200, {{"items", spec_json(svc.spec())}});
    }));

    srv.Get("/api/spec/duplicates", guarded([&svc](const auto&, auto& res) {
        send_json(res, 200, {{"duplicates", svc.duplicates()}});
    }));

    srv.Get("/api/prototypes", guarded([&svc](const auto&, auto& res) {
        json list = json::array();
        for (const Prototype& p : svc.library().prototypes) {
            list.push_back({{"name", p.name}, {"kind", to_string(p.kind)}, {"params", params_to_json(p.params)}});
        }
        send_json(res, 200, {{"prototypes", list}});
    }));

    srv.Post("/api/prototypes", guarded([&svc](const auto& req, auto& res) {
        const json body = parse_body(req);
        if (!body.contains("name") || !body["name"].is_string()) bad_request("\"name\" must be a string");
        if (!body.contains("module_id") || !body["module_id"].is_number_integer()) {
            bad_request("\"module_id\" must be an integer");
        }
        bool overwrite = false;
        if (body.contains("overwrite")) {
            if (!body["overwrite"].is_boolean()) bad_request("\"overwrite\" must be a boolean");
            overwrite = body["overwrite"].get<bool>();
        }
        const std::string name = body["name"].get<std::string>();
        svc.save_prototype(name, body["module_id"].get<Id>(), overwrite);
        send_json(res, 201, {{"name", name}});
    }));

    srv.Post(R"(/api/prototypes/([^/]+)/instantiate)", guarded([&svc](const auto& req, auto& res) {
        const json body = parse_body(req);
        const Id id = svc.place_prototype(req.matches[1].str(), body_point(body, "at"), body_layer(body));
        send_json(res, 201, {{"id", id}});
    }));

    srv.Get(R"(/api/prototypes/([^/]+)/preview)", guarded([&svc](const auto& req, auto& res) {
        res.status = 200;
        res.set_content(svc.preview_svg(req.matches[1].str()), kSvg);
    }));

    srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (!res.body.empty()) return;
        const int status = res.status;
        send_json(res, status,
                  {{"status", status}, {"code", status == 404 ? "not_found" : "bad_request"},
                   {"message", "no such endpoint"}});
    });
}

}  // namespace

HttpApi::HttpApi(DocumentService& service) : impl_(std::make_unique<Impl>(service)) {
    // The library default adds SO_REUSEPORT, which lets a second server share
    // an occupied port instead of failing to bind.
    impl_->server.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
    });
    install_routes(impl_->server, impl_->service);
}

HttpApi::~HttpApi() = default;

bool HttpApi::bind(const std::string& host, int port) {
    if (port == 0) {
        port_ = impl_->server.bind_to_any_port(host);
        return port_ > 0;
    }
    if (!impl_->server.bind_to_port(host, port)) return false;
    port_ = port;
    return true;
}

void HttpApi::run() { impl_->server.listen_after_bind(); }

void HttpApi::stop() { impl_->server.stop(); }

void HttpApi::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace modulecad
