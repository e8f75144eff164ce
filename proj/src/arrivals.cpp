#include "edgehost/arrivals.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "edgehost/rng.hpp"

namespace edgehost {

namespace {

// ceil() that ignores representation error of a quotient landing on an integer.
std::size_t ceil_count(double x)
{
    return static_cast<std::size_t>(std::ceil(x * (1.0 - 1e-12)));
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, std::size_t line)
{
    const std::string t = trim(text);
    double value = 0.0;
    const auto* end = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(t.data(), end, value);
    if (t.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value))
        throw std::runtime_error("trace line " + std::to_string(line) + ": not a number: '" + t + "'");
    return value;
}

}  // namespace

ArrivalSequence gen_iid_bernoulli(double mu, double kappa, std::size_t T, std::uint64_t seed)
{
    if (!(mu > 0.0) || !(kappa > 0.0) || mu > kappa)
        throw std::invalid_argument("Bernoulli arrivals need 0 < mu <= kappa");
    const double p = mu / kappa;
    Rng rng(seed, Stream::Arrivals);
    ArrivalSequence out;
    out.requests.reserve(T);
    for (std::size_t t = 0; t < T; ++t) out.requests.push_back(rng.bernoulli(p) ? kappa : 0.0);
    return out;
}

ArrivalSequence gen_iid_discrete(std::span<const double> values, std::span<const double> probs,
                                 double kappa, std::size_t T, std::uint64_t seed)
{
    if (values.empty() || values.size() != probs.size())
        throw std::invalid_argument("discrete arrivals need matching non-empty values and probs");
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0.0) || values[i] > kappa)
            throw std::invalid_argument("discrete arrival value outside [0, kappa]");
        if (!(probs[i] >= 0.0)) throw std::invalid_argument("negative probability");
        total += probs[i];
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("probabilities must sum to 1");

    Rng rng(seed, Stream::Arrivals);
    ArrivalSequence out;
    out.requests.reserve(T);
    for (std::size_t t = 0; t < T; ++t) {
        const double u = rng.uniform() * total;
        double acc = 0.0;
        std::size_t pick = values.size() - 1;
        for (std::size_t i = 0; i < values.size(); ++i) {
            acc += probs[i];
            if (u < acc) {
                pick = i;
                break;
            }
        }
        out.requests.push_back(values[pick]);
    }
    return out;
}

Level cheapest_fetch_level(const HostingLadder& ladder, const CostParams& params)
{
    Level best = 1;
    double best_value = std::numeric_limits<double>::infinity();
    for (Level i = 1; i < ladder.size(); ++i) {
        const double a = ladder.alpha(i);
        const double denom = params.kappa - params.c * a - params.kappa * ladder.g(i);
        if (!(denom > 0.0))
            throw std::invalid_argument("burst length undefined: kappa <= c alpha_i + g(alpha_i) kappa");
        const double value = params.M * a / denom;
        if (value < best_value) {
            best_value = value;
            best = i;
        }
    }
    return best;
}

FrameShape frame_shape(const CostParams& params, const HostingLadder& ladder, FrameMode mode)
{
    if (!(params.c > 0.0)) throw std::invalid_argument("frames need c > 0");
    FrameShape shape;
    if (mode == FrameMode::Full) {
        if (!(params.kappa > params.c)) throw std::invalid_argument("frames need kappa > c");
        shape.burst = ceil_count(params.M / (params.kappa - params.c));
    } else {
        const Level i = cheapest_fetch_level(ladder, params);
        const double a = ladder.alpha(i);
        shape.burst = ceil_count(params.M * a /
                                 (params.kappa - params.c * a - ladder.g(i) * params.kappa));
    }
    shape.idle = ceil_count(params.M / params.c);
    return shape;
}

ArrivalSequence gen_adversarial_frames(const CostParams& params, const HostingLadder& ladder,
                                       std::size_t n_frames, FrameMode mode)
{
    const FrameShape shape = frame_shape(params, ladder, mode);
    ArrivalSequence out;
    out.requests.reserve(n_frames * shape.length());
    for (std::size_t f = 0; f < n_frames; ++f) {
        out.requests.insert(out.requests.end(), shape.burst, params.kappa);
        out.requests.insert(out.requests.end(), shape.idle, 0.0);
    }
    return out;
}

Level lower_bound_level(const HostingLadder& ladder)
{
    Level best = 1;
    for (Level i = 2; i < ladder.size(); ++i) {
        const double ratio = ladder.alpha(i) / (1.0 - ladder.g(i));
        if (ratio < ladder.alpha(best) / (1.0 - ladder.g(best))) best = i;
    }
    return best;
}

double lower_bound_probability(const CostParams& params, const HostingLadder& ladder)
{
    const Level l = lower_bound_level(ladder);
    return params.c * ladder.alpha(l) / (params.kappa * (1.0 - ladder.g(l)));
}

ArrivalSequence gen_stochastic_lower_bound(const CostParams& params, const HostingLadder& ladder,
                                           std::size_t T, std::uint64_t seed)
{
    const double p = lower_bound_probability(params, ladder);
    if (!(p > 0.0) || p > 1.0)
        throw std::invalid_argument("lower-bound Bernoulli parameter outside (0, 1]");
    Rng rng(seed, Stream::Arrivals);
    ArrivalSequence out;
    out.requests.reserve(T);
    for (std::size_t t = 0; t < T; ++t)
        out.requests.push_back(rng.bernoulli(p) ? params.kappa : 0.0);
    return out;
}

TraceLoad load_trace(const std::filesystem::path& path, double kappa, ClipPolicy clip)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file " + path.string());

    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);)
        if (!trim(line).empty()) lines.push_back(line);
    if (lines.empty()) throw std::runtime_error("trace file " + path.string() + " is empty");

    TraceLoad out;
    const bool csv = lines.front().find(',') != std::string::npos;
    auto push = [&](double count, std::size_t line_no) {
        if (count < 0.0)
            throw std::runtime_error("trace line " + std::to_string(line_no) + ": negative count");
        if (count > kappa) {
            if (clip == ClipPolicy::Reject) {
                throw std::runtime_error("trace line " + std::to_string(line_no) +
                                         ": count exceeds kappa");
            }
            std::clog << "warning: trace line " << line_no << ": count " << count
                      << " clipped to kappa = " << kappa << '\n';
            count = kappa;
            ++out.clipped;
        }
        out.arrivals.requests.push_back(count);
    };

    if (!csv) {
        for (std::size_t i = 0; i < lines.size(); ++i) push(parse_number(lines[i], i + 1), i + 1);
        return out;
    }

    if (lines.size() < 2) throw std::runtime_error("trace CSV has a header but no rows");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto comma = lines[i].find(',');
        if (comma == std::string::npos || lines[i].find(',', comma + 1) != std::string::npos)
            throw std::runtime_error("trace line " + std::to_string(i + 1) + ": expected slot,count");
        const double slot = parse_number(lines[i].substr(0, comma), i + 1);
        if (slot != static_cast<double>(i))
            throw std::runtime_error("trace line " + std::to_string(i + 1) +
                                     ": slots must be consecutive from 1");
        push(parse_number(lines[i].substr(comma + 1), i + 1), i + 1);
    }
    return out;
}

std::uint64_t arrival_checksum(const ArrivalSequence& arrivals)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double r : arrivals.requests) {
        auto bits = std::bit_cast<std::uint64_t>(r);
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

}  // namespace edgehost
