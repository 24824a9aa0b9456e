fn main() {
    // Restore the default SIGPIPE disposition so that writing into a closed
    // pipe (e.g. `stresscal report ... | head`) terminates the process
    // quietly instead of panicking on the next print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(stresscal::cli::main_entry(std::env::args_os()));
}
