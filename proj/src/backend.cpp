#include "mgems/backend.hpp"

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mgems/branch_bound.hpp"
#include "mgems/mps.hpp"

namespace mgems {

namespace {

class ReferenceBackend : public MilpBackend {
public:
    std::string name() const override { return "reference"; }
    MilpSolution solve(const MilpInstance& instance, const SolveOptions& options) override {
        return solve_milp(instance, options);
    }
};

class MpsRoundtripBackend : public MilpBackend {
public:
    std::string name() const override { return "mps-roundtrip"; }
    MilpSolution solve(const MilpInstance& instance, const SolveOptions& options) override {
        std::stringstream buf;
        write_mps(instance, buf);
        const MilpInstance parsed = read_mps(buf);
        return solve_milp(parsed, options);
    }
};

class SubprocessBackend : public MilpBackend {
public:
    SubprocessBackend(std::string name, std::string command)
        : name_(std::move(name)), command_(std::move(command)) {}

    std::string name() const override { return name_; }

    MilpSolution solve(const MilpInstance& instance, const SolveOptions& options) override {
        (void)options;
        char dir_template[] = "/tmp/mgems-milp-XXXXXX";
        const char* dir = mkdtemp(dir_template);
        if (!dir) throw ResourceError("subprocess backend: cannot create temp directory");
        const std::string in_path = std::string(dir) + "/instance.mps";
        const std::string out_path = std::string(dir) + "/solution.txt";
        {
            std::ofstream out(in_path);
            write_mps(instance, out);
        }
        std::string cmd = command_;
        replace_all(cmd, "{in}", in_path);
        replace_all(cmd, "{out}", out_path);
        const int rc = std::system(cmd.c_str());
        if (rc != 0) {
            std::remove(in_path.c_str());
            throw ResourceError("subprocess backend: command failed: " + cmd);
        }
        std::ifstream sol_in(out_path);
        if (!sol_in) throw ResourceError("subprocess backend: no solution file produced");
        MilpSolution sol = read_solution(sol_in, instance);
        std::remove(in_path.c_str());
        std::remove(out_path.c_str());
        ::rmdir(dir);
        return sol;
    }

private:
    static void replace_all(std::string& s, const std::string& what, const std::string& with) {
        for (std::size_t pos = s.find(what); pos != std::string::npos; pos = s.find(what, pos)) {
            s.replace(pos, what.size(), with);
            pos += with.size();
        }
    }

    std::string name_;
    std::string command_;
};

}  // namespace

std::shared_ptr<MilpBackend> make_reference_backend() {
    return std::make_shared<ReferenceBackend>();
}

std::shared_ptr<MilpBackend> make_mps_roundtrip_backend() {
    return std::make_shared<MpsRoundtripBackend>();
}

std::shared_ptr<MilpBackend> make_subprocess_backend(const std::string& name,
                                                     const std::string& command_template) {
    return std::make_shared<SubprocessBackend>(name, command_template);
}

BackendRegistry::BackendRegistry() { backends_.push_back(make_reference_backend()); }

void BackendRegistry::register_backend(std::shared_ptr<MilpBackend> backend) {
    for (const auto& b : backends_) {
        if (b->name() == backend->name())
            throw ValidationError("backend '" + backend->name() + "' is already registered");
    }
    backends_.push_back(std::move(backend));
}

std::shared_ptr<MilpBackend> BackendRegistry::get(const std::string& name) const {
    for (const auto& b : backends_)
        if (b->name() == name) return b;
    throw ValidationError("unknown backend '" + name + "'");
}

std::vector<std::string> BackendRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& b : backends_) out.push_back(b->name());
    return out;
}

}  // namespace mgems
