#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mgems/milp.hpp"

namespace mgems {

class MilpBackend {
public:
    virtual ~MilpBackend() = default;
    virtual std::string name() const = 0;
    virtual MilpSolution solve(const MilpInstance& instance, const SolveOptions& options) = 0;
};

/// Built-in branch-and-bound.
std::shared_ptr<MilpBackend> make_reference_backend();

/// Round-trips the instance through the MPS writer and reader before solving
/// with the reference solver; exercises the exchange format in-process.
std::shared_ptr<MilpBackend> make_mps_roundtrip_backend();

/// External solver subprocess: the instance is written as an MPS file, the
/// command is run with {in} and {out} substituted, and the solution file is
/// read back. Example command: "mgems solve-mps --in {in} --out {out}".
std::shared_ptr<MilpBackend> make_subprocess_backend(const std::string& name,
                                                     const std::string& command_template);

/// Name-keyed backend collection; "reference" is always present.
class BackendRegistry {
public:
    BackendRegistry();

    /// Registers a backend under its own name; duplicate names are an error.
    void register_backend(std::shared_ptr<MilpBackend> backend);

    /// Lookup by name; unknown names are an error.
    std::shared_ptr<MilpBackend> get(const std::string& name) const;

    std::vector<std::string> names() const;

private:
    std::vector<std::shared_ptr<MilpBackend>> backends_;
};

}  // namespace mgems
