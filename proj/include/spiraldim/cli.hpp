#pragma once

#include "spiraldim/boxdim.hpp"
#include "spiraldim/ode_sim.hpp"
#include "spiraldim/polar_curve.hpp"
#include "spiraldim/theorems.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace spiraldim {

/// Smallest epsilon used when none is requested: twice the final amplitude,
/// but never below this floor.
inline constexpr double kDefaultEpsFloor = 1e-4;

struct DimensionRunOptions {
    double t_end = 1e5;
    Tolerances tolerances;
    double eps_max = 0.1;
    std::optional<double> eps_min;  ///< default: max(2 f(end), kDefaultEpsFloor)
    Method method = Method::SausageGrid;
    WindowPolicy window = WindowPolicy::AutoPlateau;
    FitModel model = FitModel::HeadCorrected;
    double grid_factor = kDefaultGridFactor;
    double tolerance = 0.05;
};

/// Simulation, polar conversion, profile and fit for one system.
struct DimensionRun {
    Trajectory trajectory;
    PolarCurve curve;
    SausageProfile profile;
    DimensionReport report;
};

double default_eps_min(const PolarCurve& curve);

/// Integrates sys from init, converts the certified tail to polar form and
/// estimates its dimension. The prediction comes from the system's damping.
DimensionRun run_dimension(const SystemSpec& sys, StateSample init, const DimensionRunOptions& options);

/// Profile and fit for an existing curve, without prediction.
DimensionReport estimate_curve_dimension(const PolarCurve& curve, double eps_max, std::optional<double> eps_min,
                                         Method method, WindowPolicy window, FitModel model,
                                         double grid_factor = kDefaultGridFactor,
                                         SausageProfile* profile_out = nullptr);

struct TableRow {
    std::string label;
    double lambda = 0.0;
    double gamma = 0.0;
    double expected_dimension = 0.0;
    Rectifiability expected_rectifiability = Rectifiability::NonRectifiable;
    std::optional<double> predicted;
    double estimated = 0.0;
    double std_error = 0.0;
    std::optional<Rectifiability> classified;
    double t_end = 0.0;
    double eps_min = 0.0;
    std::string error;  ///< non-empty when the row could not be computed
    bool pass = false;
};

struct TableOptions {
    double t_end = 1e5;
    Tolerances tolerances;
    WindowPolicy window = WindowPolicy::AutoPlateau;
    FitModel model = FitModel::HeadCorrected;
    double tolerance = 0.05;
};

/// The damping family lambda t^-gamma at the six parameter pairs
/// (3, 3/4), (3, 1), (2, 1), (5/3, 1), (4/3, 1), (1, 1).
std::vector<TableRow> reproduce_table(const TableOptions& options);

std::string table_text(const std::vector<TableRow>& rows);
std::string table_csv(const std::vector<TableRow>& rows);

/// Runs the command line. Returns 0 on success, 1 on computation errors and
/// 2 on argument or config file errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

} // namespace spiraldim
