//! All-or-nothing output: files are written next to the target and renamed.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::{CliResult, Failure, Product};

fn staging_path(target: &Path) -> PathBuf {
    let name = target.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    target.with_file_name(format!(".{name}.{}.partial", std::process::id()))
}

fn write_file(target: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = staging_path(target);
    let res = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_data()?;
        std::fs::rename(&tmp, target)
    })();
    if res.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    res
}

fn write_dir(target: &Path, files: &[(String, Vec<u8>)]) -> std::io::Result<()> {
    if target.exists() {
        return Err(std::io::Error::new(
            std::io::ErrorKind::AlreadyExists,
            format!("{} already exists", target.display()),
        ));
    }
    let tmp = staging_path(target);
    let res = (|| {
        std::fs::create_dir_all(&tmp)?;
        for (name, bytes) in files {
            std::fs::write(tmp.join(name), bytes)?;
        }
        std::fs::rename(&tmp, target)
    })();
    if res.is_err() {
        let _ = std::fs::remove_dir_all(&tmp);
    }
    res
}

pub(crate) fn emit(target: Option<&Path>, product: Product) -> CliResult<()> {
    let res = match (product, target) {
        (Product::Bytes(b), Some(p)) => write_file(p, &b),
        (Product::Text(t), Some(p)) => write_file(p, t.as_bytes()),
        (Product::Directory(files), Some(p)) => write_dir(p, &files),
        (Product::Bytes(b), None) => write_stdout(&b),
        (Product::Text(t), None) => write_stdout(t.as_bytes()),
        (Product::Directory(_), None) => return Err(Failure::Usage("no output directory given".into())),
    };
    res.map_err(|e| Failure::Data(e.into()))
}

fn write_stdout(bytes: &[u8]) -> std::io::Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(bytes)?;
    out.flush()
}
