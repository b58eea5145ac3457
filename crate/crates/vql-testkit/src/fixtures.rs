//! Small hand-built databases shared across test suites.

use relational_model::{ColumnDef, DType, Database, ForeignKey, Table, Value};

fn text(s: &str) -> Value {
    Value::Text(s.into())
}

fn num(n: f64) -> Value {
    Value::Number(n)
}

fn time(s: &str) -> Value {
    Value::Time(relational_model::parse_time(s).expect("fixture timestamp"))
}

fn col(name: &str, dtype: DType) -> ColumnDef {
    ColumnDef { name: name.into(), dtype }
}

/// One table of technicians and their teams; four rows, one duplicate
/// name.
pub fn technician_db() -> Database {
    Database {
        id: "technician_db".into(),
        tables: vec![Table {
            name: "technician".into(),
            columns: vec![col("name", DType::Text), col("team", DType::Text)],
            primary_key: vec![],
            rows: vec![
                vec![text("Alice"), text("NYY")],
                vec![text("Bob"), text("BOS")],
                vec![text("Bob"), text("BOS")],
                vec![text("Cara"), text("LAD")],
            ],
        }],
        foreign_keys: vec![],
    }
}

/// One table of dated payments spanning two months.
pub fn payments_db() -> Database {
    Database {
        id: "payments_db".into(),
        tables: vec![Table {
            name: "payments".into(),
            columns: vec![col("date", DType::Time), col("amount", DType::Number)],
            primary_key: vec![],
            rows: vec![
                vec![time("2021-01-05"), num(10.0)],
                vec![time("2021-01-20"), num(4.0)],
                vec![time("2021-03-02"), num(7.5)],
            ],
        }],
        foreign_keys: vec![],
    }
}

/// Customers and their orders, linked by a foreign key; one order has
/// no customer.
pub fn orders_db() -> Database {
    Database {
        id: "orders_db".into(),
        tables: vec![
            Table {
                name: "customers".into(),
                columns: vec![
                    col("id", DType::Number),
                    col("name", DType::Text),
                    col("city", DType::Text),
                ],
                primary_key: vec!["id".into()],
                rows: vec![
                    vec![num(1.0), text("Ann"), text("Oslo")],
                    vec![num(2.0), text("Ben"), text("Lima")],
                    vec![num(3.0), text("Cy"), text("Oslo")],
                ],
            },
            Table {
                name: "orders".into(),
                columns: vec![
                    col("id", DType::Number),
                    col("customer_id", DType::Number),
                    col("total", DType::Number),
                    col("placed_at", DType::Time),
                ],
                primary_key: vec!["id".into()],
                rows: vec![
                    vec![num(10.0), num(1.0), num(5.0), time("2021-01-05")],
                    vec![num(11.0), num(1.0), num(2.5), time("2021-01-20")],
                    vec![num(12.0), num(2.0), num(4.0), time("2021-03-02")],
                    vec![num(13.0), Value::Null, num(9.0), time("2021-03-02")],
                ],
            },
        ],
        foreign_keys: vec![ForeignKey {
            from_table: "orders".into(),
            from_column: "customer_id".into(),
            to_table: "customers".into(),
            to_column: "id".into(),
        }],
    }
}

/// All fixture databases, keyed by their ids.
pub fn all_fixture_dbs() -> Vec<Database> {
    vec![technician_db(), payments_db(), orders_db()]
}
