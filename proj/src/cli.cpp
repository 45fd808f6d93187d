#include "modulecad/cli.hpp"

#include <cmath>
#include <csignal>
#include <filesystem>
#include <optional>
#include <ostream>
#include <thread>

#include <pthread.h>

#include "CLI11.hpp"
#include "modulecad/document_io.hpp"
#include "modulecad/http_api.hpp"
#include "modulecad/number_format.hpp"
#include "modulecad/params.hpp"
#include "modulecad/service.hpp"

namespace modulecad {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::vector<double> parse_numbers(const std::string& text, const char* flag) {
    std::vector<double> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        const std::string part = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            std::size_t used = 0;
            const double v = std::stod(part, &used);
            if (used != part.size() || !std::isfinite(v)) throw std::invalid_argument(part);
            out.push_back(v);
        } catch (const std::exception&) {
            fail(ErrorCode::usage, std::string(flag) + ": \"" + text + "\" is not a comma-separated number list");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

Point parse_pair(const std::string& text, const char* flag) {
    const auto v = parse_numbers(text, flag);
    if (v.size() != 2) fail(ErrorCode::usage, std::string(flag) + " expects x,y");
    return {v[0], v[1]};
}

json read_params_file(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::invalid_params, path + ": malformed JSON: " + e.what());
    }
}

fs::path library_for(const std::string& lib_flag, const std::string& document) {
    if (!lib_flag.empty()) return lib_flag;
    return default_library_path(document);
}

// Blocks SIGINT and SIGTERM in the calling thread (and threads it spawns
// later) and stops the server once one of them arrives.
int serve(const std::string& document, const std::string& lib, const std::string& host, int port,
          std::ostream& out, std::ostream& err) {
    DocumentService service(document, library_for(lib, document));
    HttpApi api(service);

    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    sigset_t previous;
    pthread_sigmask(SIG_BLOCK, &signals, &previous);

    if (!api.bind(host, port)) {
        pthread_sigmask(SIG_SETMASK, &previous, nullptr);
        err << "error: io_error: cannot listen on " << host << ":" << port << "\n";
        return 1;
    }
    out << "listening on http://" << host << ":" << api.port() << "\n" << std::flush;

    std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        api.stop();
    });
    api.run();
    // run() also returns on internal failure; wake the waiter in that case.
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Parametric drawing modules", "modulecad"};
    app.require_subcommand(1);

    std::string file;
    std::string kind;
    std::string params_path;
    std::string by;
    std::string base;
    std::string scale;
    std::string out_path;
    std::string viewport;
    std::string lib;
    std::string name;
    std::string at;
    std::string host = "127.0.0.1";
    Id id = 0;
    int port = 8080;
    double zone_size = kDefaultZoneSize;
    bool force = false;
    bool check_duplicates = false;
    bool overwrite = false;

    auto* cmd_new = app.add_subcommand("new", "Create an empty drawing");
    cmd_new->add_option("file", file)->required();
    cmd_new->add_option("--zone-size", zone_size, "Spatial index cell size in mm")->check(CLI::PositiveNumber);
    cmd_new->add_flag("--force", force, "Overwrite an existing file");

    auto* cmd_add = app.add_subcommand("add", "Add a module");
    cmd_add->add_option("file", file)->required();
    cmd_add->add_option("--kind", kind)->required();
    cmd_add->add_option("--params", params_path)->required();

    auto* cmd_set = app.add_subcommand("set", "Replace a module's parameters");
    cmd_set->add_option("file", file)->required();
    cmd_set->add_option("--id", id)->required();
    cmd_set->add_option("--params", params_path)->required();

    auto* cmd_move = app.add_subcommand("move", "Translate a module");
    cmd_move->add_option("file", file)->required();
    cmd_move->add_option("--id", id)->required();
    cmd_move->add_option("--by", by, "dx,dy")->required();

    auto* cmd_stretch = app.add_subcommand("stretch", "Scale a module about a base point");
    cmd_stretch->add_option("file", file)->required();
    cmd_stretch->add_option("--id", id)->required();
    cmd_stretch->add_option("--base", base, "x,y")->required();
    cmd_stretch->add_option("--scale", scale, "sx[,sy]")->required();

    auto* cmd_del = app.add_subcommand("del", "Delete a module");
    cmd_del->add_option("file", file)->required();
    cmd_del->add_option("--id", id)->required();

    auto* cmd_regen = app.add_subcommand("regen", "Regenerate module geometry from parameters");
    cmd_regen->add_option("file", file)->required();
    auto* regen_id = cmd_regen->add_option("--id", id);

    auto* cmd_export = app.add_subcommand("export", "Write an SVG");
    cmd_export->add_option("file", file)->required();
    cmd_export->add_option("--out", out_path)->required();
    cmd_export->add_option("--viewport", viewport, "x0,y0,x1,y1");

    auto* cmd_spec = app.add_subcommand("spec", "Print the bill of materials");
    cmd_spec->add_option("file", file)->required();
    cmd_spec->add_flag("--check-duplicates", check_duplicates);

    auto* cmd_proto = app.add_subcommand("proto", "Prototype library");
    cmd_proto->require_subcommand(1);
    auto* proto_save = cmd_proto->add_subcommand("save", "Store a module's parameters as a prototype");
    proto_save->add_option("file", file)->required();
    proto_save->add_option("--lib", lib)->required();
    proto_save->add_option("--name", name)->required();
    proto_save->add_option("--id", id)->required();
    proto_save->add_flag("--overwrite", overwrite);
    auto* proto_list = cmd_proto->add_subcommand("list", "List prototypes");
    proto_list->add_option("--lib", lib)->required();
    auto* proto_place = cmd_proto->add_subcommand("place", "Instantiate a prototype");
    proto_place->add_option("file", file)->required();
    proto_place->add_option("--lib", lib)->required();
    proto_place->add_option("--name", name)->required();
    proto_place->add_option("--at", at, "x,y")->required();

    auto* cmd_serve = app.add_subcommand("serve", "Serve the HTTP API");
    cmd_serve->add_option("file", file)->required();
    cmd_serve->add_option("--port", port)->check(CLI::Range(0, 65535));
    cmd_serve->add_option("--host", host);
    cmd_serve->add_option("--lib", lib, "Prototype library (default: <file stem>.protolib.json)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        // A subcommand's --help surfaces as CallForHelp from the subcommand.
        err << "error: usage: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*cmd_new) {
            if (!force && fs::exists(file)) fail(ErrorCode::io, file + " already exists (use --force)");
            save_drawing(Drawing(zone_size), file);
            return 0;
        }
        if (*cmd_serve) return serve(file, lib, host, port, out, err);

        if (*cmd_proto && *proto_list) {
            for (const Prototype& p : load_library(lib).prototypes) {
                out << p.name << "\t" << to_string(p.kind) << "\n";
            }
            return 0;
        }

        LoadOptions load;
        load.repair = static_cast<bool>(*cmd_regen);
        DocumentService svc(file, library_for(lib, file), load);

        if (*cmd_add) {
            out << svc.add_module(parse_kind(kind), read_params_file(params_path)) << "\n";
        } else if (*cmd_set) {
            svc.set_params(id, read_params_file(params_path));
        } else if (*cmd_move) {
            svc.move_module(id, parse_pair(by, "--by"));
        } else if (*cmd_stretch) {
            const auto s = parse_numbers(scale, "--scale");
            if (s.size() != 1 && s.size() != 2) fail(ErrorCode::usage, "--scale expects sx or sx,sy");
            svc.stretch_module(id, parse_pair(base, "--base"), s[0], s.size() == 2 ? s[1] : s[0]);
        } else if (*cmd_del) {
            svc.delete_module(id);
        } else if (*cmd_regen) {
            if (*regen_id) {
                svc.regenerate(id);
            } else {
                svc.regenerate();
            }
        } else if (*cmd_export) {
            RenderOptions opts;
            if (!viewport.empty()) {
                const auto v = parse_numbers(viewport, "--viewport");
                if (v.size() != 4) fail(ErrorCode::usage, "--viewport expects x0,y0,x1,y1");
                opts.viewport = BBox{{std::min(v[0], v[2]), std::min(v[1], v[3])},
                                     {std::max(v[0], v[2]), std::max(v[1], v[3])}};
            }
            write_file_atomically(out_path, svc.render(opts));
        } else if (*cmd_spec) {
            for (const SpecItem& i : svc.spec()) {
                out << i.position << "\t" << i.name << "\t" << i.unit << "\t" << format_decimal(i.qty) << "\n";
            }
            if (check_duplicates) {
                for (const std::string& p : svc.duplicates()) out << "DUPLICATE\t" << p << "\n";
            }
        } else if (*proto_save) {
            svc.save_prototype(name, id, overwrite);
        } else if (*proto_place) {
            out << svc.place_prototype(name, parse_pair(at, "--at")) << "\n";
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << to_api_error(e).code << ": " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace modulecad
