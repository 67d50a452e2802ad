use std::io::Write;
use std::path::PathBuf;

use super::config::PipelineConfig;
use super::csv_field;
use super::stages::{read_graph, read_metrics, read_profiles, read_tables, write_csv};
use crate::citegraph::{write_alternatives_csv, write_histograms_csv};
use crate::detector::write_profiles_csv;
use crate::tabulator::{opt, write_decay_csv, write_followers_csv};
use crate::{Error, Result};

pub const REPORT_DIR: &str = "report";

/// One file per table family, in write order.
pub const REPORT_FILES: &[&str] = &[
    "profiles.csv",
    "followers.csv",
    "temporal_decay.csv",
    "regressions.csv",
    "regression_bands.csv",
    "spearman.csv",
    "path_histograms.csv",
    "indirect_adjusted.csv",
    "alternatives.csv",
    "rank_deltas.csv",
    "catchphrase_origin.csv",
    "eponyms.csv",
    "author_counts.csv",
];

/// Collects every table into `<output>/report`. Needs the graph and
/// metrics stages to have run.
pub fn run_report(cfg: &PipelineConfig) -> Result<PathBuf> {
    cfg.validate()?;
    let profiles = read_profiles(cfg)?;
    let tables = read_tables(cfg)?;
    let graph = read_graph(cfg)?;
    let metrics = read_metrics(cfg)?;
    let dir = cfg.output.join(REPORT_DIR);
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;

    write_csv(&dir, "profiles.csv", |w| write_profiles_csv(w, &profiles))?;
    write_csv(&dir, "followers.csv", |w| write_followers_csv(w, &tables))?;
    write_csv(&dir, "temporal_decay.csv", |w| {
        write_decay_csv(w, &metrics.decay)
    })?;
    write_csv(&dir, "regressions.csv", |w| {
        writeln!(
            w,
            "name,points,slope,slope_halfwidth,intercept,residual_sd,note"
        )?;
        for f in &metrics.fits {
            match &f.fit {
                Some(r) => writeln!(
                    w,
                    "{},{},{},{},{},{},",
                    f.name,
                    f.points,
                    r.slope,
                    opt(r.slope_halfwidth),
                    r.intercept,
                    opt(r.residual_sd)
                )?,
                None => writeln!(
                    w,
                    "{},{},,,,,{}",
                    f.name,
                    f.points,
                    csv_field(f.note.as_deref().unwrap_or(""))
                )?,
            }
        }
        Ok(())
    })?;
    write_csv(&dir, "regression_bands.csv", |w| {
        writeln!(w, "name,x,fit,lower,upper")?;
        for f in &metrics.fits {
            if let Some(r) = &f.fit {
                for b in r.band_samples(cfg.band_samples) {
                    writeln!(
                        w,
                        "{},{},{},{},{}",
                        f.name,
                        b.x,
                        b.fit,
                        opt(b.lower),
                        opt(b.upper)
                    )?;
                }
            }
        }
        Ok(())
    })?;
    write_csv(&dir, "spearman.csv", |w| {
        writeln!(w, "x,y,rho,p_value,rejects_null")?;
        if let Some(s) = &metrics.spearman {
            writeln!(
                w,
                "citations,hidden,{},{},{}",
                s.rho, s.p_value, s.rejects_null
            )?;
        }
        Ok(())
    })?;
    write_csv(&dir, "path_histograms.csv", |w| {
        write_histograms_csv(w, &graph.histograms, graph.max_depth)
    })?;
    write_csv(&dir, "indirect_adjusted.csv", |w| {
        writeln!(w, "topic_id,lag,p_direct,p_adjusted")?;
        for p in &graph.indirect {
            writeln!(w, "{},{},{},{}", p.topic_id, p.lag, p.p_direct, p.p_adjusted)?;
        }
        Ok(())
    })?;
    write_csv(&dir, "alternatives.csv", |w| {
        write_alternatives_csv(w, &graph.alternatives)
    })?;
    write_csv(&dir, "rank_deltas.csv", |w| {
        writeln!(
            w,
            "paper_id,rank_explicit,rank_with_hidden,change,c_explicit,h_attributed"
        )?;
        for r in &metrics.rank_deltas {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                csv_field(&r.paper_id),
                r.rank_explicit,
                r.rank_with_hidden,
                r.change(),
                r.c_explicit,
                r.h_attributed
            )?;
        }
        Ok(())
    })?;
    write_csv(&dir, "catchphrase_origin.csv", |w| {
        let o = &metrics.origin;
        writeln!(w, "considered,absent,excluded,fraction_absent")?;
        writeln!(
            w,
            "{},{},{},{}",
            o.considered,
            o.absent,
            o.excluded,
            opt(o.fraction_absent())
        )
    })?;
    write_csv(&dir, "eponyms.csv", |w| {
        writeln!(w, "topic_id,class")?;
        for (t, c) in &metrics.classes {
            writeln!(w, "{t},{c}")?;
        }
        Ok(())
    })?;
    write_csv(&dir, "author_counts.csv", |w| {
        writeln!(w, "class,papers,mean,halfwidth")?;
        for (c, s) in &metrics.author_counts {
            writeln!(w, "{c},{},{},{}", s.papers, s.mean, opt(s.halfwidth))?;
        }
        Ok(())
    })?;
    Ok(dir)
}
