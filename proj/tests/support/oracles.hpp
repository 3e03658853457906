/** \file  oracles.hpp
 *  \brief Slow, obviously-correct reference implementations the library is checked against.
 */
#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lca/model.hpp"

namespace lca::test {

/// Weighted sum 10..2 over the first nine digits, modulus 11.
char oracle_isbn10_check(const std::string &first_nine);
/// Alternating weights 1 and 3 over the first twelve digits, modulus 10.
char oracle_isbn13_check(const std::string &first_twelve);
bool oracle_isbn10_valid(const std::string &isbn10);
bool oracle_isbn13_valid(const std::string &isbn13);

std::string random_isbn10(std::mt19937_64 &rng);
/// A valid 978-prefixed ISBN-13 whose body is `serial` zero-padded to nine digits.
std::string isbn13_from_serial(std::uint64_t serial);

/// rank_i = 1 + #{x_j < x_i} + (#{x_j == x_i} - 1) / 2, computed by counting.
std::vector<double> oracle_average_ranks(const std::vector<double> &values);
/// Textbook Pearson: sum of centered products over the root of the sums of squares.
double oracle_pearson(const std::vector<double> &x, const std::vector<double> &y);
double oracle_spearman(const std::vector<double> &x, const std::vector<double> &y);

/// Competition rank of `counts[index]` in descending order, read off a sorted copy.
std::size_t oracle_competition_rank(const std::vector<std::uint64_t> &counts, std::size_t index);
/// The same for every element at once: one descending sort, then the first position of each value.
std::vector<std::size_t> oracle_competition_ranks(const std::vector<std::uint64_t> &counts);

/// Connected components of the edition graph (shared OCLC, shared ISBN, equal work key) by BFS
/// over an explicit adjacency matrix.
std::set<std::set<std::string>> oracle_clusters(const CatalogSnapshot &snapshot);

} // namespace lca::test
