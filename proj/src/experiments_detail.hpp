#ifndef MHLAB_EXPERIMENTS_DETAIL_HPP
#define MHLAB_EXPERIMENTS_DETAIL_HPP

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mhlab/experiments.hpp"

namespace mhlab::exp::detail {

/// execute() on caller-built suites keyed by dimension.
ResultStore execute_on(const ExperimentPlan& plan, const std::map<std::size_t, bench::Suite>& suites,
                       const ExecuteOptions& options);

std::vector<std::string_view> split_csv(std::string_view line);
double parse_real(std::string_view text, std::string_view column, std::size_t line_no);
std::size_t parse_size(std::string_view text, std::string_view column, std::size_t line_no);
std::uint64_t parse_u64(std::string_view text, std::string_view column, std::size_t line_no);

}  // namespace mhlab::exp::detail

#endif
