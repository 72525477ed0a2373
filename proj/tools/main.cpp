#include <cstdio>
int main(){ std::puts("submatch"); }
