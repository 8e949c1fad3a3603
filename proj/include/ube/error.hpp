/*
   Copyright 2026 The ube-audit Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ube {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad parameter or precondition on user-supplied configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed input file. `line` is 1-based when known, 0 otherwise.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& what, std::size_t line = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line)
    {
    }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class TruncatedFile : public FormatError {
public:
    explicit TruncatedFile(std::uint64_t offset)
        : FormatError("file truncated at byte offset " + std::to_string(offset)), offset_(offset)
    {
    }
    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

class IngestError : public Error {
public:
    using Error::Error;
};

class UnknownToken : public Error {
public:
    explicit UnknownToken(const std::string& token)
        : Error("token not in vocabulary: " + token), token_(token)
    {
    }
    const std::string& token() const noexcept { return token_; }

private:
    std::string token_;
};

} // namespace ube
