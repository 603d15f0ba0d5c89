// bragg-sense: batch driver for the figure experiments.
#include <chrono>
#include <ctime>
#include <iostream>

#include <CLI11.hpp>

#include "bragg/experiments.hpp"
#include "bragg/parallel.hpp"

namespace {

std::string utc_timestamp()
{
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bragg Mach-Zehnder transfer matrices, signals and phase uncertainty"};
    std::string tag, config, out, format;
    int threads = 0;
    app.add_option("tag", tag, "experiment")->required()->check(CLI::IsMember(bragg::experiment_tags()));
    app.add_option("--config", config, "INI configuration file")->required();
    app.add_option("--out", out, "output directory (overrides output.dir)");
    app.add_option("--format", format, "csv or json (overrides output.format)")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads, "worker threads (default: BRAGG_SENSE_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        bragg::RunConfig cfg = bragg::RunConfig::from_file(config);
        if (!out.empty()) cfg.set("output.dir", out);
        if (!format.empty()) cfg.set("output.format", format);
        if (threads > 0) bragg::set_thread_count(static_cast<std::size_t>(threads));

        const auto t0 = std::chrono::steady_clock::now();
        const bragg::ResultRecord rec = bragg::run_experiment(tag, cfg, std::cerr);
        const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        const std::string dir = cfg.text("output.dir");
        for (const auto& p : bragg::emit(rec, cfg.text("output.format"), dir, cfg.integer("output.precision")))
            std::cout << p.string() << "\n";
        bragg::emit_run_metadata(dir, tag, utc_timestamp(), runtime, bragg::thread_count());
        return 0;
    } catch (const bragg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const bragg::DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const bragg::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    }
}
