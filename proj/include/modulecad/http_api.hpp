#pragma once

#include <memory>
#include <string>

#include "modulecad/service.hpp"

namespace modulecad {

/// JSON-over-HTTP front end of a DocumentService.
class HttpApi {
public:
    explicit HttpApi(DocumentService& service);
    ~HttpApi();
    HttpApi(const HttpApi&) = delete;
    HttpApi& operator=(const HttpApi&) = delete;

    /// Port 0 picks a free port. Returns false when the address is in use.
    bool bind(const std::string& host, int port);
    int port() const { return port_; }
    /// Serves until stop(); call after a successful bind.
    void run();
    void stop();
    /// Blocks until run() is accepting connections.
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int port_ = 0;
};

}  // namespace modulecad
