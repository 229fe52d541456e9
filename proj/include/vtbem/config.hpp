#ifndef VTBEM_CONFIG_HPP
#define VTBEM_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "vtbem/curve.hpp"
#include "vtbem/types.hpp"

namespace vtbem {

// Parsed job description. The JSON tree is validated strictly: unknown keys
// are errors, not warnings.
struct JobConfig {
    enum class Mode { CaseI, CaseII, DomainDecomposition };

    struct Physics {
        double wavelength = 1.1;
        double deltaV = 0.0, deltaT = 0.0;
        double gamma = 1.0;
    };

    struct BcSpec {
        enum class Type { Zero, PointSource, Constant, File } type = Type::Zero;
        Vec2 source{0.0, 0.0};
        Complex value{0.0, 0.0};
        std::string path;
    };

    struct Component {
        bool is_star = true;
        CurvePtr curve;
        BcSpec bc;
        std::optional<Complex> robin_override;
    };

    struct RegionSpec {
        std::vector<int> components;  // indices into `components`
        std::vector<int> interfaces;  // subset of the circ components above
    };

    struct Pairing {
        int region_a = 0, comp_a = 0; // comp indices are global
        int region_b = 0, comp_b = 0;
    };

    Physics physics;
    Complex robin_a{0.0, 0.0};
    bool robin_incoming = false, robin_outgoing = false;
    std::vector<Component> components;
    std::vector<RegionSpec> regions;
    std::vector<Pairing> pairings;

    int order = 16;
    double panels_per_wavelength = 4.0;
    int corner_depth = 7;
    int circ_corner_depth = -1;
    double fin_length = 0.0;

    bool has_targets = false;
    double bounds[4] = {0, 0, 0, 0};
    int nx = 0, ny = 0;

    std::string field_path = "field.csv";
    std::string density_dir = ".";
    std::string diagnostics_path = "diagnostics.txt";

    // the validated input with defaults filled, in canonical JSON form
    std::string canonical;

    Mode mode() const;
};

JobConfig parse_config(const std::string& text);
std::string serialize_config(const JobConfig& cfg);

} // namespace vtbem

#endif
