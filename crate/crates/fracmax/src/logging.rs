//! `FRACMAX_LOG` (env_logger filter syntax, default `info`) controls
//! verbosity. Records go to the run's log file once one is attached; warnings
//! and errors also go to stderr.

use std::fs::File;
use std::io::Write;
use std::path::Path;
use std::sync::{Mutex, OnceLock};
use std::time::{SystemTime, UNIX_EPOCH};

use log::{Level, LevelFilter, Log, Metadata, Record};

struct RunLogger {
    filter: env_logger::Logger,
    file: Mutex<Option<File>>,
}

static LOGGER: OnceLock<RunLogger> = OnceLock::new();

impl Log for RunLogger {
    fn enabled(&self, metadata: &Metadata) -> bool {
        self.filter.enabled(metadata)
    }

    fn log(&self, record: &Record) {
        if !self.filter.matches(record) {
            return;
        }
        if record.level() <= Level::Warn {
            eprintln!("{}: {}", record.level(), record.args());
        }
        if let Ok(mut guard) = self.file.lock() {
            if let Some(f) = guard.as_mut() {
                let now = SystemTime::now().duration_since(UNIX_EPOCH).unwrap_or_default();
                let _ = writeln!(
                    f,
                    "[{}.{:03} {:5} {}] {}",
                    now.as_secs(),
                    now.subsec_millis(),
                    record.level(),
                    record.target(),
                    record.args()
                );
            }
        }
    }

    fn flush(&self) {
        if let Ok(mut guard) = self.file.lock() {
            if let Some(f) = guard.as_mut() {
                let _ = f.flush();
            }
        }
    }
}

/// Installs the logger; later calls are no-ops.
pub fn init() {
    let logger = LOGGER.get_or_init(|| RunLogger {
        filter: env_logger::Builder::from_env(env_logger::Env::new().filter_or("FRACMAX_LOG", "info")).build(),
        file: Mutex::new(None),
    });
    if log::set_logger(logger).is_ok() {
        log::set_max_level(logger.filter.filter().max(LevelFilter::Warn));
    }
}

/// Sends subsequent records to `path` as well.
pub fn attach_file(path: &Path) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let file = File::create(path)?;
    if let Some(logger) = LOGGER.get() {
        if let Ok(mut guard) = logger.file.lock() {
            *guard = Some(file);
        }
    }
    Ok(())
}

pub fn detach_file() {
    if let Some(logger) = LOGGER.get() {
        logger.flush();
        if let Ok(mut guard) = logger.file.lock() {
            *guard = None;
        }
    }
}
