use std::io::{self, Write};

/// Standard output that ends the process quietly once the reader goes away
/// (e.g. `polarlat sweep ... | head`), as SIGPIPE would.
struct Stdout<W>(W);

impl<W: Write> Stdout<W> {
    fn check<T>(r: io::Result<T>) -> io::Result<T> {
        if let Err(e) = &r {
            if e.kind() == io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
        }
        r
    }
}

impl<W: Write> Write for Stdout<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        Self::check(self.0.write(buf))
    }

    fn flush(&mut self) -> io::Result<()> {
        Self::check(self.0.flush())
    }
}

fn main() {
    let stdout = io::stdout();
    let code = polarlat::cli::run(std::env::args_os(), &mut Stdout(stdout.lock()));
    std::process::exit(code);
}
