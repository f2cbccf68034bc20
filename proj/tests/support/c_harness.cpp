#include "support/c_harness.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "support/fixtures.hpp"

namespace testsupport {

namespace {

const char* const kStubs = R"(#include <stdio.h>
#include <stdlib.h>

static FILE *script;

static long long next_value(void) {
  long long v;
  if (!script) {
    const char *path = getenv("HORNFOLIO_NONDET");
    script = path ? fopen(path, "r") : NULL;
    if (!script) exit(44);
  }
  if (fscanf(script, "%lld", &v) != 1) exit(43);
  return v;
}

void reach_error(void) { exit(42); }
int __VERIFIER_nondet_int(void) { return (int)next_value(); }
long __VERIFIER_nondet_long(void) { return (long)next_value(); }
long long __VERIFIER_nondet_longlong(void) { return next_value(); }
unsigned char __VERIFIER_nondet_uchar(void) { return (unsigned char)next_value(); }
unsigned short __VERIFIER_nondet_ushort(void) { return (unsigned short)next_value(); }
unsigned int __VERIFIER_nondet_uint(void) { return (unsigned int)next_value(); }
unsigned long long __VERIFIER_nondet_ulonglong(void) { return (unsigned long long)next_value(); }
)";

int run_shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

void write(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

std::string c_compiler() {
  const char* cc = std::getenv("CC");
  return cc && *cc ? cc : "cc";
}

CompileResult compile_object(const std::string& source, const std::string& dir, const std::string& flags) {
  write(dir + "/prog.c", source);
  CompileResult r;
  r.ok = run_shell(c_compiler() + " -std=c99 " + flags + " -c " + dir + "/prog.c -o " + dir + "/prog.o 2> " +
                   dir + "/cc.log") == 0;
  r.diagnostics = read_file(dir + "/cc.log");
  return r;
}

CompileResult compile_with_stubs(const std::string& source, const std::string& dir) {
  write(dir + "/prog.c", source);
  write(dir + "/stubs.c", kStubs);
  CompileResult r;
  r.binary = dir + "/prog";
  r.ok = run_shell(c_compiler() + " -std=c99 -O1 " + dir + "/prog.c " + dir + "/stubs.c -o " + r.binary + " 2> " +
                   dir + "/cc.log") == 0;
  r.diagnostics = read_file(dir + "/cc.log");
  return r;
}

int run_scripted(const std::string& binary, const std::vector<std::int64_t>& values, const std::string& dir) {
  std::ostringstream text;
  for (auto v : values) text << v << "\n";
  const std::string script = dir + "/nondet.txt";
  write(script, text.str());
  return run_shell("HORNFOLIO_NONDET=" + script + " " + binary + " > /dev/null 2>&1");
}

}  // namespace testsupport
