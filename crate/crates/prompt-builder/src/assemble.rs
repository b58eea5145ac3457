//! Prompt text assembly and query sketching.

use crate::{
    Demonstration, PromptError, PromptSpec, COT_INSTRUCTION, MAX_DEMONSTRATIONS,
    REPAIR_INSTRUCTION, REPAIR_PERSONA,
};
use vql_core::{parse, AggArg, ColumnExpr, VqlAst};

fn push_block(out: &mut String, label: &str, body: &str) {
    out.push_str(label);
    out.push('\n');
    out.push_str(body.trim_end());
    out.push_str("\n\n");
}

fn check_count(demos: &[Demonstration]) -> Result<(), PromptError> {
    if demos.len() > MAX_DEMONSTRATIONS {
        return Err(PromptError::TooManyDemonstrations(demos.len()));
    }
    Ok(())
}

fn header(spec: &PromptSpec) -> String {
    let mut out = String::new();
    if let Some(persona) = &spec.persona {
        out.push_str(persona.trim_end());
        out.push_str("\n\n");
    }
    out.push_str(spec.instruction.trim_end());
    out.push_str("\n\n");
    out
}

/// Lays the prompt out as instruction, demonstrations, then the test
/// table and question with an open answer slot; a persona line, when
/// present, comes first.
pub fn build_prompt(spec: &PromptSpec) -> Result<String, PromptError> {
    check_count(&spec.demonstrations)?;
    let mut out = header(spec);
    for demo in &spec.demonstrations {
        push_block(&mut out, "Table:", &demo.serialized_table);
        push_block(&mut out, "Question:", &demo.question);
        push_block(&mut out, "VQL:", &demo.gold_vql);
    }
    push_block(&mut out, "Table:", &spec.test_table);
    push_block(&mut out, "Question:", &spec.test_question);
    out.push_str("VQL:\n");
    Ok(out)
}

/// The keyword skeleton of a query: every clause the tree carries,
/// with names replaced by slots.
pub fn sketch_of(ast: &VqlAst) -> String {
    let y_slot = match &ast.select.y {
        ColumnExpr::Column(_) => "<y>".to_string(),
        ColumnExpr::Aggregate(agg) => match agg.arg {
            AggArg::Star => "<agg>(*)".to_string(),
            AggArg::Column(_) => "<agg>(<y>)".to_string(),
        },
    };
    let mut out = format!("VISUALIZE <type> SELECT <x>, {y_slot} FROM <table>");
    for _ in &ast.joins {
        out.push_str(" JOIN <table> ON <col> = <col>");
    }
    if ast.where_pred.is_some() {
        out.push_str(" WHERE <cond>");
    }
    if ast.bin.is_some() {
        out.push_str(" BIN <col> BY <interval>");
    }
    if ast.group.is_some() {
        out.push_str(" GROUP BY <col>");
    }
    if ast.order_by.is_some() {
        out.push_str(" ORDER BY <col> <dir>");
    }
    out
}

/// Chain-of-thought layout: every demonstration carries the
/// step-by-step sentence and its gold query's sketch between
/// question and answer, and the test block ends right after the
/// step-by-step sentence.
pub fn build_cot_prompt(spec: &PromptSpec) -> Result<String, PromptError> {
    check_count(&spec.demonstrations)?;
    let mut out = header(spec);
    for demo in &spec.demonstrations {
        let ast = parse(&demo.gold_vql).map_err(|e| PromptError::BadGoldVql(e.to_string()))?;
        push_block(&mut out, "Table:", &demo.serialized_table);
        push_block(&mut out, "Question:", &demo.question);
        out.push_str(COT_INSTRUCTION);
        out.push('\n');
        out.push_str(&format!("Sketch: {}\n\n", sketch_of(&ast)));
        push_block(&mut out, "VQL:", &demo.gold_vql);
    }
    push_block(&mut out, "Table:", &spec.test_table);
    push_block(&mut out, "Question:", &spec.test_question);
    out.push_str(COT_INSTRUCTION);
    out.push('\n');
    Ok(out)
}

/// Repair layout: repair persona, table, question, the failed query,
/// an optional error note, then the fix request over an open answer
/// slot.
pub fn build_repair_prompt(
    failed_vql: &str,
    table_text: &str,
    question: &str,
    error_note: Option<&str>,
) -> Result<String, PromptError> {
    if failed_vql.trim().is_empty() {
        return Err(PromptError::EmptyFailedVql);
    }
    let mut out = String::new();
    out.push_str(REPAIR_PERSONA);
    out.push_str("\n\n");
    push_block(&mut out, "Table:", table_text);
    push_block(&mut out, "Question:", question);
    push_block(&mut out, "Failed VQL:", failed_vql);
    if let Some(note) = error_note {
        push_block(&mut out, "Error:", note);
    }
    out.push_str(REPAIR_INSTRUCTION);
    out.push('\n');
    out.push_str("VQL:\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PERSONA_LINE;

    fn demo() -> Demonstration {
        Demonstration {
            question: "How many technicians are there for each name?".into(),
            db_id: "technician_db".into(),
            serialized_table: "technician(name, team)".into(),
            gold_vql: "VISUALIZE bar SELECT name, COUNT(name) FROM technician \
                       WHERE team != \"NYY\" GROUP BY name ORDER BY name ASC"
                .into(),
        }
    }

    #[test]
    fn zero_shot_prompt_is_instruction_plus_test_block() {
        let spec = PromptSpec::zero_shot("technician(name, team)", "How many?");
        let text = build_prompt(&spec).unwrap();
        assert_eq!(
            text,
            "please generate VQL based on the description of tabular data and question.\n\n\
             Table:\ntechnician(name, team)\n\nQuestion:\nHow many?\n\nVQL:\n"
        );
    }

    #[test]
    fn persona_line_comes_first() {
        let mut spec = PromptSpec::zero_shot("t(a)", "Q?");
        spec.persona = Some(PERSONA_LINE.into());
        let text = build_prompt(&spec).unwrap();
        assert!(text.starts_with("You are a data visualization assistant\n\n"));
    }

    #[test]
    fn demonstrations_precede_the_test_block() {
        let mut spec = PromptSpec::zero_shot("t(a)", "Q?");
        spec.demonstrations = vec![demo()];
        let text = build_prompt(&spec).unwrap();
        let demo_at = text.find("technician(name, team)").unwrap();
        let test_at = text.find("t(a)").unwrap();
        assert!(demo_at < test_at);
        assert!(text.ends_with("VQL:\n"));
    }

    #[test]
    fn sketch_mirrors_clause_presence() {
        let ast = parse(&demo().gold_vql).unwrap();
        assert_eq!(
            sketch_of(&ast),
            "VISUALIZE <type> SELECT <x>, <agg>(<y>) FROM <table> \
             WHERE <cond> GROUP BY <col> ORDER BY <col> <dir>"
        );
        let minimal = parse("VISUALIZE scatter SELECT a, b FROM t").unwrap();
        assert_eq!(sketch_of(&minimal), "VISUALIZE <type> SELECT <x>, <y> FROM <table>");
        let binned =
            parse("VISUALIZE line SELECT d, COUNT(*) FROM t BIN d BY month").unwrap();
        assert!(sketch_of(&binned).contains("BIN <col> BY <interval>"));
        assert!(sketch_of(&binned).contains("<agg>(*)"));
        let joined = parse("VISUALIZE bar SELECT a, b FROM t JOIN u ON t.a = u.a").unwrap();
        assert!(sketch_of(&joined).contains("JOIN <table> ON <col> = <col>"));
    }

    #[test]
    fn cot_demo_holds_one_sketch_between_question_and_answer() {
        let mut spec = PromptSpec::zero_shot("t(a)", "Q?");
        spec.cot = true;
        spec.demonstrations = vec![demo()];
        let text = build_cot_prompt(&spec).unwrap();
        assert_eq!(text.matches("Sketch: ").count(), 1);
        let q = text.find("How many technicians").unwrap();
        let sketch = text.find("Sketch: ").unwrap();
        let gold = text.find("VQL:\nVISUALIZE bar").unwrap();
        assert!(q < sketch && sketch < gold);
        assert!(text.ends_with(&format!("{COT_INSTRUCTION}\n")));
    }

    #[test]
    fn cot_rejects_unparsable_gold() {
        let mut spec = PromptSpec::zero_shot("t(a)", "Q?");
        spec.cot = true;
        spec.demonstrations = vec![Demonstration { gold_vql: "VISUALIZE".into(), ..demo() }];
        assert!(matches!(build_cot_prompt(&spec), Err(PromptError::BadGoldVql(_))));
    }

    #[test]
    fn repair_prompt_embeds_failure_and_note() {
        let text = build_repair_prompt(
            "VISUALIZE bar SELECT FROM t",
            "t(a, b)",
            "How many?",
            Some("expected a column name at byte 21"),
        )
        .unwrap();
        assert!(text.starts_with(REPAIR_PERSONA));
        assert!(text.contains("Failed VQL:\nVISUALIZE bar SELECT FROM t\n"));
        assert!(text.contains("Error:\nexpected a column name at byte 21\n"));
        assert!(text.contains(REPAIR_INSTRUCTION));
        assert!(text.ends_with("VQL:\n"));
    }

    #[test]
    fn repair_requires_a_failed_query() {
        assert_eq!(
            build_repair_prompt("  ", "t(a)", "Q?", None).unwrap_err(),
            PromptError::EmptyFailedVql
        );
    }
}
