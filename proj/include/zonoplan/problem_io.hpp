#ifndef ZONOPLAN_PROBLEM_IO_HPP_
#define ZONOPLAN_PROBLEM_IO_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hybzono.hpp"

namespace zonoplan
{

/// On-disk problem document: a hybrid zonotope plus an optional quadratic
/// objective. Doubles round-trip exactly.
struct ProblemFile
{
    HybZono Z;
    std::optional<SpMat> P;
    std::optional<Vec> q;
};

void save_problem(const ProblemFile& pf, const std::string& path);
ProblemFile load_problem(const std::string& path);

std::string problem_to_json(const ProblemFile& pf);
ProblemFile problem_from_json(const std::string& text);

void save_set(const HybZono& Z, const std::string& path);

struct RunRecord
{
    std::string instance_id;
    std::uint64_t seed = 0;
    std::string status;
    int iters = 0;
    int iters_ph1 = 0;
    double wall_s = 0.0; // timing metadata; the only nondeterministic field
    double r_p = 0.0;
    double objective = 0.0;
    bool verified = false;
};

inline constexpr const char* kRunReportHeader =
    "# runreport v1\ninstance_id,seed,status,iters,iters_ph1,wall_s,r_p,objective,verified\n";

void write_report(const std::vector<RunRecord>& rows, const std::string& path);

struct TrajectoryStage
{
    int k = 0;
    Vec x;
    Vec u; // empty at the terminal stage
};

void save_trajectory(const std::vector<TrajectoryStage>& stages, const std::string& path);
std::vector<TrajectoryStage> load_trajectory(const std::string& path);

void write_complexity_csv(const std::vector<SetComplexity>& rows, const std::string& path);

/// 17-significant-digit decimal form; parses back to the identical double
std::string format_double(double v);

} // namespace zonoplan

#endif
