# Linear algebra, gate kernels and circuit IR
