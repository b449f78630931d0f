fn main() {
    // Dense Hermitian eigensolves and complex matrix products go through the
    // system BLAS/LAPACK (OpenBLAS ships both in one shared object).
    println!("cargo:rustc-link-lib=dylib=openblas");
}
